#pragma once

#include <optional>

#include "varlc/circuit.hpp"
#include "varlc/fourier.hpp"

namespace varlc {

enum class Verdict { UniqueMinimum, NoExtremum, Inconclusive };

/// Which unbounded-below construction to build.
///   TwoCapacitor: sine rays through both capacitor channels; valid when S2
///                 is negative-definite.
///   EqualCapacitance: a single direction (x,y,z) with (x,y,z) S2 (x,y,z)^T < 0
///                 spread over every mode; valid when C1 = C2.
enum class DescentMode { TwoCapacitor, EqualCapacitance };

/// Result of analysing the action's critical structure.
struct ClassificationReport {
    Verdict verdict = Verdict::Inconclusive;
    bool S1_definite = false;               // S1 positive-definite
    bool S2_negative_definite = false;
    bool S2_has_negative_eigenvalue = false;
    bool equal_capacitance_case = false;    // C1 == C2 within tolerance
    std::optional<FourierCurrents> witness; // unit descent direction, NoExtremum only

    // Diagnostics carried for reporting.
    double K_C1 = 0.0;
    double Ktilde_C2 = 0.0;
    Vec S1_eigenvalues;  // ascending
    Vec S2_eigenvalues;  // ascending
    Vec witness_ray;     // action values along h * witness for h = 1, 10, 100, 1000
};

/// Builds the unit-normalized sine-coefficient descent direction for the
/// requested mode (lambda = 0, no cosine modes). `direction` supplies the
/// (x,y,z) channel weights for EqualCapacitance mode and is ignored
/// otherwise. Throws std::domain_error naming the failed definiteness /
/// capacitance precondition.
FourierCurrents descent_direction(const CircuitParams& params, DescentMode mode,
                                  const Vec& direction = {}, int Ntrunc = 64);

/// Full classification: series constants, stability matrices, verdict, and
/// (for NoExtremum) a witness whose ray the report verifies as strictly
/// decreasing before attaching. When no construction verifies, the verdict
/// falls back to Inconclusive rather than asserting an unverified claim.
/// witness_modes is the sine-mode truncation used for witness construction.
ClassificationReport classify_critical_structure(const CircuitParams& params,
                                                 int witness_modes = 64);

}  // namespace varlc
