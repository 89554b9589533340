#pragma once

namespace ft {

// Shared numerical tolerances. State variables, positions and times are
// O(1) in every supported scenario, so absolute tolerances are used
// throughout.
namespace tol {

// Bracketing root finds (branch inverses, maximizer, tangency refinement).
inline constexpr double root = 1e-12;
// Residual allowed in Rankine-Hugoniot / flux-matching identities.
inline constexpr double rankine_hugoniot = 1e-12;
// Two states are "the same value" for observation purposes.
inline constexpr double state_eq = 1e-11;
// Fronts with smaller relative speed are parallel: no collision.
inline constexpr double parallel = 1e-13;
// u-waves weaker than this are dropped from fans.
inline constexpr double zero_wave = 1e-14;
// Positions closer than this coincide when merging collision groups.
inline constexpr double position = 1e-12;

}  // namespace tol

// Hard cap on front-tracking events (livelock guard).
inline constexpr long long max_events = 10'000'000;

}  // namespace ft
