#pragma once

// Closed forms, frozen to more digits than any test needs.
namespace oracle {

inline constexpr double pi = 3.14159265358979323846264338328;
inline constexpr double pi_squared_over_3 = 3.28986813369645287294483033329;       // Σ_{n≠0} n^{-2}
inline constexpr double sqrt_pi_squared_over_3 = 1.81379936423421785059407825764;  // ‖|D|^{-1}‖₂ on the circle
inline constexpr double epstein_z2_at_4 = 6.02681203969194012354626019273;         // Σ'_{k∈Z²} |k|^{-4}
inline constexpr double catalan = 0.915965594177219015054603514932;
inline constexpr double zeta2 = 1.64493406684822643647241516665;
inline constexpr double inv_log2 = 1.442695040888963407359924681;
inline constexpr double sqrt_pi = 1.77245385090551602729816748334;

}  // namespace oracle
