#pragma once

#include <stdexcept>
#include <string>

namespace blowuplab {

/// Argument outside the mathematical domain of an evaluation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A quadrature did not reach its tolerance within the node budget.
class AccuracyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid or malformed configuration. `key` names the offending entry when known.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& what)
        : std::runtime_error(key.empty() ? what : "config key '" + key + "': " + what),
          key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

/// Parameters for which no blow-up theorem applies were used where one is required.
class NoTheoremError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A lifespan measurement ended without detecting blow-up. `outcome` is the run
/// outcome that ended it ("ReachedTmax" or "Unstable").
class NoBlowUpObserved : public std::runtime_error {
public:
    NoBlowUpObserved(std::string outcome, const std::string& what)
        : std::runtime_error(what), outcome_(std::move(outcome)) {}

    const std::string& outcome() const noexcept { return outcome_; }

private:
    std::string outcome_;
};

/// Too few samples for a derivative stencil, regression or window.
class InsufficientData : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace blowuplab
