#pragma once

#include <stdexcept>

namespace playbook {

/// Base class for every error thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// field geometry / snapshot ingestion
struct PositionOutOfField final : Error { using Error::Error; };
struct WrongPlayerCount final : Error { using Error::Error; };
struct ParseError final : Error { using Error::Error; };
struct EmptyInput final : Error { using Error::Error; };
struct MixedTeams final : Error { using Error::Error; };

// transport distance
struct DimensionMismatch final : Error { using Error::Error; };
struct ZeroMass final : Error { using Error::Error; };

// clustering
struct InvalidMatrix final : Error { using Error::Error; };

// posterior machinery
struct InvalidObservation final : Error { using Error::Error; };
struct DomainError final : Error { using Error::Error; };
struct NotUnimodal final : Error { using Error::Error; };

// comparison
struct InsufficientDraws final : Error { using Error::Error; };

// environments
struct UnknownArm final : Error { using Error::Error; };
struct MissingEnvironment final : Error { using Error::Error; };

// persistence
struct IoError final : Error { using Error::Error; };
struct SchemaError final : Error { using Error::Error; };

// validation harness
struct InfeasibleBin final : Error { using Error::Error; };

// selector
struct EmptyDb final : Error { using Error::Error; };

}  // namespace playbook
