#pragma once

#include <complex>
#include <numbers>

namespace gprs {

using cplx = std::complex<double>;

namespace phys {
inline constexpr double c0 = 299792458.0;               // m/s, exact
inline constexpr double mu0 = 1.25663706212e-6;         // H/m
inline constexpr double eps0 = 8.8541878128e-12;        // F/m
inline constexpr double eta0 = 376.730313668;           // ohm
inline constexpr double q_e = 1.602176634e-19;          // C, exact
inline constexpr double k_B = 1.380649e-23;             // J/K, exact
inline constexpr double hbar = 1.054571817e-34;         // J s
}  // namespace phys

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

inline constexpr double um = 1e-6;
inline constexpr double GHz = 1e9;
inline constexpr double THz = 1e12;

inline double wavelength(double f) { return phys::c0 / f; }

}  // namespace gprs
