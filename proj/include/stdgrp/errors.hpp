#ifndef STDGRP_ERRORS_HPP
#define STDGRP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace stdgrp {

// Base class for all library errors. Every failure mode has its own type so
// callers can catch exactly what they can handle; the code() string is stable
// and used in CLI diagnostics.
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

private:
  std::string code_;
};

#define STDGRP_DEFINE_ERROR(NAME)                                     \
  class NAME : public Error {                                         \
  public:                                                             \
    explicit NAME(const std::string& what) : Error(#NAME, what) {}    \
  }

STDGRP_DEFINE_ERROR(ModulusMismatch);
STDGRP_DEFINE_ERROR(NotAUnit);
STDGRP_DEFINE_ERROR(InexactDivision);
STDGRP_DEFINE_ERROR(DescriptorMismatch);
STDGRP_DEFINE_ERROR(NonzeroConstantTerm);
STDGRP_DEFINE_ERROR(ValuationTooLow);
STDGRP_DEFINE_ERROR(ConvergenceFailure);
STDGRP_DEFINE_ERROR(NotPowerful);
STDGRP_DEFINE_ERROR(NotAPower);
STDGRP_DEFINE_ERROR(NoStabilization);
STDGRP_DEFINE_ERROR(NoStrategyApplies);
STDGRP_DEFINE_ERROR(UnfaithfulRep);
STDGRP_DEFINE_ERROR(TransversalVerificationFailed);
STDGRP_DEFINE_ERROR(IndistinguishableAtPrecision);
STDGRP_DEFINE_ERROR(PrecisionExhausted);
STDGRP_DEFINE_ERROR(SpecializedLawInvalid);
STDGRP_DEFINE_ERROR(SyntaxError);
STDGRP_DEFINE_ERROR(UnboundVariable);

#undef STDGRP_DEFINE_ERROR

} // namespace stdgrp

#endif
