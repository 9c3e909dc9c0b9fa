#pragma once

#include <stdexcept>
#include <string>

namespace sl2 {

enum class Err {
  DivisionByZero,
  FieldMismatch,
  PrecisionExhausted,
  ZeroArgument,
  FactorizationLimit,
  NegativeUnderRealEmbedding,
  SingularMatrix,
  NotSL2,
  ZeroM,
  CharTwoUnsupported,
  KindMismatch,
  NotAnInvolution,
  OnlyCentralFixedPoints,
  NotInExtendedSymmetricSpace,
  BadParameter,
  NotChar2,
  NotChar2Infinite,
  TooLarge,
  BudgetExhausted,
  PostconditionViolation,
  ParseError,
  Unsupported,
};

inline const char* err_name(Err e) {
  switch (e) {
    case Err::DivisionByZero: return "DivisionByZero";
    case Err::FieldMismatch: return "FieldMismatch";
    case Err::PrecisionExhausted: return "PrecisionExhausted";
    case Err::ZeroArgument: return "ZeroArgument";
    case Err::FactorizationLimit: return "FactorizationLimit";
    case Err::NegativeUnderRealEmbedding: return "NegativeUnderRealEmbedding";
    case Err::SingularMatrix: return "SingularMatrix";
    case Err::NotSL2: return "NotSL2";
    case Err::ZeroM: return "ZeroM";
    case Err::CharTwoUnsupported: return "CharTwoUnsupported";
    case Err::KindMismatch: return "KindMismatch";
    case Err::NotAnInvolution: return "NotAnInvolution";
    case Err::OnlyCentralFixedPoints: return "OnlyCentralFixedPoints";
    case Err::NotInExtendedSymmetricSpace: return "NotInExtendedSymmetricSpace";
    case Err::BadParameter: return "BadParameter";
    case Err::NotChar2: return "NotChar2";
    case Err::NotChar2Infinite: return "NotChar2Infinite";
    case Err::TooLarge: return "TooLarge";
    case Err::BudgetExhausted: return "BudgetExhausted";
    case Err::PostconditionViolation: return "PostconditionViolation";
    case Err::ParseError: return "ParseError";
    case Err::Unsupported: return "Unsupported";
  }
  return "UnknownError";
}

class Sl2Error : public std::runtime_error {
 public:
  Sl2Error(Err code, const std::string& msg)
      : std::runtime_error(msg.empty() ? std::string(err_name(code))
                                       : std::string(err_name(code)) + ": " + msg),
        code_(code) {}
  Err code() const { return code_; }

 private:
  Err code_;
};

[[noreturn]] inline void fail(Err c, const std::string& m = "") { throw Sl2Error(c, m); }

inline void require(bool ok, Err c, const std::string& m = "") {
  if (!ok) fail(c, m);
}

}  // namespace sl2
