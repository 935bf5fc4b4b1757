#pragma once

// Values produced once by the oracles in oracles.hpp and frozen here; the
// oracle test re-derives them so a drifting oracle is caught as well.
namespace frozen {

inline constexpr double kGaussianMassHalfWidth8 = 2.5066282746309967;   // int_{-8}^{8} e^{-x^2/2}
inline constexpr double kSinSquaredMass = 1.5707963267948963;           // int_0^pi sin^2
inline constexpr double kOUSecondMoment8 = 0.9999999999999194;          // E x^2, truncated at 8
inline constexpr double kOUFourthMoment8 = 2.9999999999945839;          // E x^4, truncated at 8
inline constexpr double kGaussPdf0 = 0.3989422804014327;
inline constexpr double kGaussMeasureMinus1To1 = 0.68268949213708585;
inline constexpr double kGaussPerimeterMinus1To1 = 0.48394144903828673;
inline constexpr double kGaussCdf03 = 0.61791142218895267;
inline constexpr double kGaussPdf03 = 0.38138781546052414;
inline constexpr double kHe2At15 = 1.25;
inline constexpr double kHe3At07 = -1.757;
inline constexpr double kLegendreP2At03 = -0.365;
inline constexpr double kJacobi10P1At04 = 1.1;
inline constexpr double kSphere3CapVolumePi3 = 0.19550110947788529;
inline constexpr double kSphere3CapPerimeterPi3 = 0.47746482927568601;

} // namespace frozen
