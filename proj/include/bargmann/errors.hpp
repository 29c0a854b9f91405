#pragma once

#include <stdexcept>
#include <string>

namespace bargmann {

/// Raised when an instance would exceed the configured Fock-sector size cap
/// or when a basis count overflows.
struct capacity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when a truncated construction (coherent state, displaced Fock
/// state, Wigner series) discards more mass than the caller tolerates.
struct truncation_error : std::runtime_error {
    truncation_error(const std::string& what, double discarded_mass_in,
                     int suggested_cutoff_in = -1)
        : std::runtime_error(what),
          discarded_mass(discarded_mass_in),
          suggested_cutoff(suggested_cutoff_in) {}

    double discarded_mass;
    int suggested_cutoff;  // -1 when no better cutoff is known
};

/// Internal consistency violation (e.g. a quantity that must be real
/// acquiring an imaginary part beyond tolerance).
struct consistency_error : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace bargmann
