#pragma once

#include <stdexcept>
#include <string>

namespace bllab {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Construction / validation
class NonConvex : public Error { public: using Error::Error; };
class InconsistentDerivatives : public Error { public: using Error::Error; };
class TailDivergence : public Error { public: using Error::Error; };

// Quadrature / evaluation
class NonFinite : public Error { public: using Error::Error; };
class SingularWeight : public Error { public: using Error::Error; };
class DimensionCap : public Error { public: using Error::Error; };
class OutOfSupport : public Error { public: using Error::Error; };

// Functionals / stability
class SingularGram : public Error { public: using Error::Error; };
class NegativeDeficit : public Error { public: using Error::Error; };
class DegenerateFunction : public Error { public: using Error::Error; };
class OutOfRange : public Error { public: using Error::Error; };
class ZeroDeficit : public Error { public: using Error::Error; };

// Constant conversions / searches
class HypothesisViolation : public Error { public: using Error::Error; };
class DComputationFailure : public Error { public: using Error::Error; };
class EigenFailure : public Error { public: using Error::Error; };
class EmptyFamily : public Error { public: using Error::Error; };

// Front end
class ConfigError : public Error { public: using Error::Error; };
class IOError : public Error { public: using Error::Error; };
class InvariantViolation : public Error { public: using Error::Error; };

}  // namespace bllab
