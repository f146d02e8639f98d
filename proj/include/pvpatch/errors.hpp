#pragma once
#include <stdexcept>
#include <string>

namespace pvp {

enum class Errc {
  // scalar / series layer
  DenominatorDegenerate,
  NoReconstruction,
  InsufficientPrecision,
  // diamond
  IllegalCoercion,
  NotInF,
  // factorization
  SingularResidue,
  WindowExhausted,
  PrecisionExhausted,
  // groups / torsors
  DegreeOverflow,
  NotClosed,
  FixtureRequired,
  NotInvariant,
  NotNormal,
  GeneratorAuditFailed,
  BadAction,
  SingularFundamentalMatrix,
  ZeroScalar,
  // induction / patching / ebp
  BlockEmbeddingUndefined,
  FactorizationFailed,
  ReconstructionFailed,
  GaugeMismatch,
  RecoveryFailed,
  // cli / io
  BadInput,
};

const char* errc_name(Errc c);

// process exit codes: 1 verification failure, 2 input error, 3 precision/bounds exhaustion
int errc_exit_code(Errc c);

class PvError : public std::runtime_error {
public:
  PvError(Errc c, const std::string& what)
      : std::runtime_error(std::string(errc_name(c)) + ": " + what), code_(c) {}
  Errc code() const { return code_; }

private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc c, const std::string& what) { throw PvError(c, what); }

} // namespace pvp
