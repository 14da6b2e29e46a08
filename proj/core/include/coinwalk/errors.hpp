#pragma once

#include <stdexcept>
#include <string>

namespace coinwalk {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ZeroStateError : Error { using Error::Error; };
struct LabelError : Error { using Error::Error; };
struct SpaceMismatchError : Error { using Error::Error; };
struct BasisError : Error { using Error::Error; };
struct CoverageError : Error { using Error::Error; };
struct UnitarityError : Error { using Error::Error; };
struct ContractError : Error { using Error::Error; };
struct TargetError : Error { using Error::Error; };
struct MethodError : Error { using Error::Error; };
struct ArenaError : Error { using Error::Error; };
struct ParityError : Error { using Error::Error; };
struct CoprimalityError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct SizeError : Error { using Error::Error; };

} // namespace coinwalk
