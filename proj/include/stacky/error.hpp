#pragma once

#include <stdexcept>
#include <string>

namespace stacky {

enum class errc {
  dimension_mismatch,
  non_free_source,
  field_mismatch,
  division_by_zero,
  non_homogeneous,
  non_linear_form,
  general_position_violated,
  missing_exponent_cap,
  budget_exceeded,
  path_explosion,
  not_in_lambda_r,
  basis_mismatch,
  not_pic_homogeneous,
  bad_residue,
  non_generic_theta,
  invalid_input,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::non_free_source: return "NonFreeSource";
    case errc::field_mismatch: return "FieldMismatch";
    case errc::division_by_zero: return "DivisionByZero";
    case errc::non_homogeneous: return "NonHomogeneousRelation";
    case errc::non_linear_form: return "NonLinearForm";
    case errc::general_position_violated: return "GeneralPositionViolated";
    case errc::missing_exponent_cap: return "MissingExponentCap";
    case errc::budget_exceeded: return "BudgetExceeded";
    case errc::path_explosion: return "PathExplosion";
    case errc::not_in_lambda_r: return "NotInLambdaR";
    case errc::basis_mismatch: return "BasisMismatch";
    case errc::not_pic_homogeneous: return "NotPicHomogeneous";
    case errc::bad_residue: return "BadResidue";
    case errc::non_generic_theta: return "NonGenericTheta";
    case errc::invalid_input: return "InvalidInput";
  }
  return "Error";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

}  // namespace stacky
