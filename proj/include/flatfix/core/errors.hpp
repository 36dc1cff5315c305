#pragma once

#include <stdexcept>
#include <string>

namespace flatfix {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public Error { public: using Error::Error; };

// genfun / construction
class NonConvergence : public Error { public: using Error::Error; };
class OutOfDomain : public Error { public: using Error::Error; };
class ContractionFailure : public Error { public: using Error::Error; };
class GluingMismatch : public Error { public: using Error::Error; };

// dynamics
class DisplacementVanishesOnLoop : public Error { public: using Error::Error; };

// brouwer
class BoundaryPoint : public Error { public: using Error::Error; };
class SamplingInconclusive : public Error { public: using Error::Error; };
class TangencyAmbiguous : public Error { public: using Error::Error; };
class HorizonReached : public Error { public: using Error::Error; };
class ProperEndsUnresolved : public Error { public: using Error::Error; };
class ResolutionLimit : public Error { public: using Error::Error; };

} // namespace flatfix
