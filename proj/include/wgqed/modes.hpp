#pragma once

// Classical eigenmodes of a rectangular PEC waveguide along z, with the
// cross-section 0 <= x <= a, 0 <= y <= b. Time dependence is exp(-i nu t) and
// the z dependence exp(-gamma z), where gamma = i beta above cutoff and
// gamma > 0 below it.

#include <compare>
#include <string>
#include <vector>

#include "wgqed/types.hpp"

namespace wgqed {

struct WaveguideSpec {
    double a = 0.0;  // width along x
    double b = 0.0;  // height along y
    double eps = 1.0;
    double mu = 1.0;

    double area() const { return a * b; }
    /// sqrt(eps mu): inverse light speed in the medium.
    double index() const;
};

/// Throws DomainError unless a >= b > 0 and eps, mu > 0.
void validate(const WaveguideSpec& spec);

enum class Polarization { TE, TM };

struct ModeIndex {
    Polarization pol = Polarization::TE;
    int m = 0;
    int n = 0;

    auto operator<=>(const ModeIndex&) const = default;
};

/// Throws DomainError naming the violated rule.
void validate(const ModeIndex& mode);
std::string to_string(const ModeIndex& mode);
std::string to_string(Polarization pol);

enum class Branch { Propagating, Localized, Cutoff };
std::string to_string(Branch branch);

struct ModeDispersion {
    double h = 0.0;     // transverse wavenumber h_mn
    double nu_c = 0.0;  // cutoff frequency h / sqrt(eps mu)
    Branch branch = Branch::Cutoff;
    double beta = 0.0;   // > 0 on the propagating branch
    double gamma = 0.0;  // > 0 on the localized branch

    /// gamma in exp(-gamma z): i*beta, gamma or 0.
    Complex gamma_complex() const;
};

/// Relative tolerance on nu - nu_c used to classify the cutoff branch.
inline constexpr double kCutoffTolerance = 1e-12;

double transverse_wavenumber(const WaveguideSpec& spec, const ModeIndex& mode);
double cutoff_frequency(const WaveguideSpec& spec, const ModeIndex& mode);
ModeDispersion dispersion(const WaveguideSpec& spec, const ModeIndex& mode, double nu);

/// Branch point parametrization nu = nu_c + u^2 (Propagating) or
/// nu = nu_c - u^2 (Localized), u > 0. beta or gamma is computed as
/// u sqrt(eps mu (nu + nu_c)), which stays accurate arbitrarily close to cutoff.
struct OffsetDispersion {
    double nu = 0.0;
    ModeDispersion dispersion;
};
OffsetDispersion dispersion_at_offset(const WaveguideSpec& spec, const ModeIndex& mode, double u,
                                      Branch branch);

/// z profile of a mode. Signed: exp(-gamma z). Reversed: exp(+gamma z), the
/// counter-propagating partner above cutoff. Abs: exp(-gamma |z - z0|), the
/// localized mode centred on the atom plane z0 (localized branch only).
struct Profile {
    enum class Kind { Signed, Reversed, Abs };
    Kind kind = Kind::Signed;
    double z0 = 0.0;

    static Profile signed_exp() { return {Kind::Signed, 0.0}; }
    static Profile reversed_exp() { return {Kind::Reversed, 0.0}; }
    static Profile abs_exp(double z0) { return {Kind::Abs, z0}; }
};

struct FieldSample {
    CVec3 E;
    CVec3 H;
    Vec3 position;
};

/// All six field components. `amplitude` is E0 for TM modes and H0 for TE
/// modes. The longitudinal component that vanishes for the polarization
/// (H_z for TM, E_z for TE) is exactly zero.
FieldSample field_at(const WaveguideSpec& spec, const ModeIndex& mode, double nu,
                     Complex amplitude, const Vec3& point,
                     const Profile& profile = Profile::signed_exp());

/// field_at with a precomputed dispersion for (mode, nu).
FieldSample field_at(const WaveguideSpec& spec, const ModeIndex& mode, double nu,
                     const ModeDispersion& d, Complex amplitude, const Vec3& point,
                     const Profile& profile);

/// max over the six components of |lap F + k^2 F| / (k^2 |F|_scale), with
/// centered second differences of spacing `step`. |F|_scale is the largest
/// vector norm of E (resp. H) over the stencil. The point must be at least
/// 2*step from every wall and, for Abs profiles, from the z0 plane.
double helmholtz_residual(const WaveguideSpec& spec, const ModeIndex& mode, double nu,
                          const Vec3& point, double step,
                          const Profile& profile = Profile::signed_exp());

/// |div E| / (k |E|_scale) with centered first differences.
double divergence_residual(const WaveguideSpec& spec, const ModeIndex& mode, double nu,
                           const Vec3& point, double step,
                           const Profile& profile = Profile::signed_exp());

/// max component of |curl E - i nu mu H| / (k |E|_scale). Checks the relative
/// sign and scale between the E and H component sets.
double faraday_residual(const WaveguideSpec& spec, const ModeIndex& mode, double nu,
                        const Vec3& point, double step,
                        const Profile& profile = Profile::signed_exp());

/// Every valid (pol, m, n) with m, n <= max_mn, in ModeIndex order.
std::vector<ModeIndex> enumerate_modes(int max_mn);

/// enumerate_modes sorted by cutoff frequency (ties keep ModeIndex order).
std::vector<ModeIndex> modes_by_cutoff(const WaveguideSpec& spec, int max_mn);

}  // namespace wgqed
