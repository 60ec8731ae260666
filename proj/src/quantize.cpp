#include "wgqed/quantize.hpp"

#include <algorithm>
#include <cmath>

#include "wgqed/errors.hpp"

namespace wgqed {

std::string to_string(Normalization n) {
    return n == Normalization::EnergyExact ? "energy-exact" : "printed-closed-form";
}

std::string to_string(DosModel d) {
    return d == DosModel::PaperLiteral ? "paper-literal" : "waveguide-dispersion";
}

void validate(const WaveguideSpec& spec, const Atom& atom) {
    validate(spec);
    if (!(atom.r0.x > 0.0 && atom.r0.x < spec.a && atom.r0.y > 0.0 && atom.r0.y < spec.b)) {
        throw DomainError("atom: position must lie strictly inside the cross section");
    }
    if (!(atom.omega > 0.0)) throw DomainError("atom: omega must be positive");
}

double amplitude_sq(const WaveguideSpec& spec, const ModeIndex& mode, double nu,
                    const QuantizationBox& box, Normalization normalization) {
    return amplitude_sq(spec, mode, nu, dispersion(spec, mode, nu), box, normalization);
}

double amplitude_sq(const WaveguideSpec& spec, const ModeIndex& mode, double nu,
                    const ModeDispersion& d, const QuantizationBox& box,
                    Normalization normalization) {
    if (!(box.L > 0.0)) throw DomainError("quantization box: L must be positive");
    if (d.branch == Branch::Cutoff) {
        throw DomainError("normalize: " + to_string(mode) + " is at cutoff");
    }
    const double S = spec.area();
    const double eps = spec.eps;
    const double mu = spec.mu;
    const double h2 = d.h * d.h;
    const bool tm = mode.pol == Polarization::TM;
    const bool propagating = d.branch == Branch::Propagating;

    if (normalization == Normalization::PrintedClosedForm) {
        if (tm) {
            return propagating ? 4.0 * kHbar * h2 / (eps * eps * mu * nu * box.L * S)
                               : 4.0 * d.gamma * kHbar * h2 / (eps * eps * mu * nu * S);
        }
        return propagating ? 4.0 * kHbar * h2 / (nu * eps * mu * mu * box.L * S)
                           : 4.0 * d.gamma * kHbar * h2 / (nu * eps * mu * mu * S);
    }

    // A vanishing index doubles the cross-section integral of cos^2.
    const double neumann = (mode.m == 0 || mode.n == 0) ? 0.5 : 1.0;
    if (tm) {
        return propagating ? 4.0 * kHbar * h2 / (eps * eps * mu * nu * box.L * S)
                           : 4.0 * d.gamma * kHbar * nu / (eps * S);
    }
    return neumann * (propagating ? 4.0 * kHbar * h2 / (nu * eps * mu * mu * box.L * S)
                                  : 4.0 * d.gamma * kHbar * nu / (mu * S));
}

NormalizedMode normalize(const WaveguideSpec& spec, const ModeIndex& mode, double nu,
                         const QuantizationBox& box, Normalization normalization) {
    NormalizedMode nm;
    nm.mode = mode;
    nm.nu = nu;
    nm.branch = dispersion(spec, mode, nu);
    nm.amp = std::sqrt(amplitude_sq(spec, mode, nu, box, normalization));
    nm.normalization = normalization;
    return nm;
}

Profile atom_profile(const ModeDispersion& branch, double z0, Travel travel) {
    if (branch.branch == Branch::Localized) return Profile::abs_exp(z0);
    return travel == Travel::MinusZ ? Profile::signed_exp() : Profile::reversed_exp();
}

Coupling coupling_at(const WaveguideSpec& spec, const Atom& atom, const ModeIndex& mode,
                     double nu, const QuantizationBox& box, Normalization normalization,
                     Travel travel) {
    return coupling_at(spec, atom, mode, nu, dispersion(spec, mode, nu), box, normalization,
                       travel);
}

Coupling coupling_at(const WaveguideSpec& spec, const Atom& atom, const ModeIndex& mode,
                     double nu, const ModeDispersion& d, const QuantizationBox& box,
                     Normalization normalization, Travel travel) {
    const double amp = std::sqrt(amplitude_sq(spec, mode, nu, d, box, normalization));
    const FieldSample f =
        field_at(spec, mode, nu, d, amp, atom.r0, atom_profile(d, atom.r0.z, travel));
    // p_ba . E with p_ba = conj(p_ab).
    return {mode, nu, -conj_dot(atom.dipole, f.E) / kHbar};
}

namespace {

struct ZRange {
    double lo;
    double hi;
    bool split_at_zero;
};

ZRange z_range(const ModeDispersion& a, const ModeDispersion& b, const QuantizationBox& box) {
    double gamma_min = 0.0;
    for (const ModeDispersion* d : {&a, &b}) {
        if (d->branch == Branch::Localized) {
            gamma_min = gamma_min == 0.0 ? d->gamma : std::min(gamma_min, d->gamma);
        }
    }
    if (gamma_min == 0.0) return {-0.5 * box.L, 0.5 * box.L, false};
    // exp(-2 gamma |z|) < 1e-34 beyond this.
    const double reach = 40.0 / gamma_min;
    return {-reach, reach, true};
}

// Largest |integrand| on a coarse cross-section grid at z = 0; sets the
// absolute floor so integrands that cancel to zero still converge.
template <class F>
double peak_magnitude(const WaveguideSpec& spec, F&& integrand) {
    double peak = 0.0;
    for (int i = 1; i < 8; ++i) {
        for (int j = 1; j < 8; ++j) {
            peak = std::max(peak, std::abs(integrand(spec.a * i / 8.0, spec.b * j / 8.0, 0.0)));
        }
    }
    return peak;
}

template <class F>
auto integrate_volume(const WaveguideSpec& spec, const ZRange& zr, F&& integrand,
                      const numerics::QuadratureSpec& quad) {
    const double peak = peak_magnitude(spec, integrand);
    numerics::QuadratureSpec inner = quad;
    inner.tolerance = std::min(quad.tolerance, 1e-13);
    numerics::QuadratureSpec outer = quad;
    outer.abs_floor = 1e-15 * peak * spec.a * spec.b * (zr.hi - zr.lo);
    numerics::QuadratureSpec x_spec = inner;
    x_spec.abs_floor = 1e-15 * peak * spec.a;
    numerics::QuadratureSpec y_spec = inner;
    y_spec.abs_floor = 1e-15 * peak * spec.a * spec.b;
    auto over_z = [&](double lo, double hi) {
        return numerics::integrate(
                   [&](double z) {
                       return numerics::integrate(
                                  [&](double y) {
                                      return numerics::integrate(
                                                 [&](double x) { return integrand(x, y, z); }, 0.0,
                                                 spec.a, x_spec)
                                          .value;
                                  },
                                  0.0, spec.b, y_spec)
                           .value;
                   },
                   lo, hi, outer)
            .value;
    };
    if (zr.split_at_zero) return over_z(zr.lo, 0.0) + over_z(0.0, zr.hi);
    return over_z(zr.lo, zr.hi);
}

}  // namespace

double mode_energy(const WaveguideSpec& spec, const NormalizedMode& nm, const QuantizationBox& box,
                   const numerics::QuadratureSpec& quad) {
    const Profile profile = atom_profile(nm.branch, 0.0);
    const ZRange zr = z_range(nm.branch, nm.branch, box);
    const double twice = integrate_volume(
        spec, zr,
        [&](double x, double y, double z) {
            const FieldSample f = field_at(spec, nm.mode, nm.nu, nm.amp, {x, y, z}, profile);
            return spec.eps * norm_sq(f.E) + spec.mu * norm_sq(f.H);
        },
        quad);
    return 0.5 * twice;
}

Complex mode_overlap(const WaveguideSpec& spec, const ModeIndex& a, const ModeIndex& b, double nu,
                     const QuantizationBox& box, const numerics::QuadratureSpec& quad) {
    const ModeDispersion da = dispersion(spec, a, nu);
    const ModeDispersion db = dispersion(spec, b, nu);
    const Profile pa = atom_profile(da, 0.0);
    const Profile pb = atom_profile(db, 0.0);
    const ZRange zr = z_range(da, db, box);
    return integrate_volume(
        spec, zr,
        [&](double x, double y, double z) {
            const FieldSample fa = field_at(spec, a, nu, 1.0, {x, y, z}, pa);
            const FieldSample fb = field_at(spec, b, nu, 1.0, {x, y, z}, pb);
            return spec.eps * conj_dot(fb.E, fa.E);
        },
        quad);
}

double continuum_weight(const WaveguideSpec& spec, const ModeIndex& mode, double nu,
                        const QuantizationBox& box, DosModel dos) {
    return continuum_weight(spec, mode, nu, dispersion(spec, mode, nu), box, dos);
}

double continuum_weight(const WaveguideSpec& spec, const ModeIndex& mode, double nu,
                        const ModeDispersion& d, const QuantizationBox& box, DosModel dos) {
    if (d.branch != Branch::Propagating) {
        throw DomainError("continuum_weight: " + to_string(mode) + " is " + to_string(d.branch) +
                          " at nu = " + std::to_string(nu) +
                          "; only propagating modes have a beta continuum");
    }
    const double prefactor = box.L / (2.0 * kPi);
    if (dos == DosModel::PaperLiteral) return prefactor * spec.index();
    return prefactor * spec.eps * spec.mu * nu / d.beta;
}

}  // namespace wgqed
