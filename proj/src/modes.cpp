#include "wgqed/modes.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "wgqed/errors.hpp"
#include "wgqed/numerics.hpp"

namespace wgqed {

double WaveguideSpec::index() const { return std::sqrt(eps * mu); }

void validate(const WaveguideSpec& spec) {
    if (!(spec.a > 0.0) || !(spec.b > 0.0)) {
        throw DomainError("waveguide: a and b must be positive");
    }
    if (spec.a < spec.b) {
        throw DomainError("waveguide: the x side a must not be shorter than b");
    }
    if (!(spec.eps > 0.0) || !(spec.mu > 0.0)) {
        throw DomainError("waveguide: eps and mu must be positive");
    }
}

void validate(const ModeIndex& mode) {
    if (mode.pol == Polarization::TM) {
        if (mode.m < 1 || mode.n < 1) {
            throw DomainError("mode " + to_string(mode) + ": TM modes need m >= 1 and n >= 1");
        }
    } else {
        if (mode.m < 0 || mode.n < 0) {
            throw DomainError("mode " + to_string(mode) + ": TE modes need m >= 0 and n >= 0");
        }
        if (mode.m == 0 && mode.n == 0) {
            throw DomainError("mode " + to_string(mode) + ": TE modes cannot have m = n = 0");
        }
    }
}

std::string to_string(Polarization pol) { return pol == Polarization::TE ? "TE" : "TM"; }

std::string to_string(const ModeIndex& mode) {
    return to_string(mode.pol) + "(" + std::to_string(mode.m) + "," + std::to_string(mode.n) + ")";
}

std::string to_string(Branch branch) {
    switch (branch) {
        case Branch::Propagating:
            return "propagating";
        case Branch::Localized:
            return "localized";
        case Branch::Cutoff:
            return "cutoff";
    }
    return "unknown";
}

Complex ModeDispersion::gamma_complex() const {
    switch (branch) {
        case Branch::Propagating:
            return {0.0, beta};
        case Branch::Localized:
            return {gamma, 0.0};
        case Branch::Cutoff:
            break;
    }
    return {0.0, 0.0};
}

double transverse_wavenumber(const WaveguideSpec& spec, const ModeIndex& mode) {
    const double kx = mode.m * kPi / spec.a;
    const double ky = mode.n * kPi / spec.b;
    return std::sqrt(kx * kx + ky * ky);
}

double cutoff_frequency(const WaveguideSpec& spec, const ModeIndex& mode) {
    return transverse_wavenumber(spec, mode) / spec.index();
}

ModeDispersion dispersion(const WaveguideSpec& spec, const ModeIndex& mode, double nu) {
    validate(mode);
    if (!(nu > 0.0)) throw DomainError("dispersion: nu must be positive");
    ModeDispersion d;
    d.h = transverse_wavenumber(spec, mode);
    d.nu_c = d.h / spec.index();
    const double k2 = spec.eps * spec.mu * nu * nu;
    if (std::abs(nu - d.nu_c) <= kCutoffTolerance * d.nu_c) {
        d.branch = Branch::Cutoff;
    } else if (nu > d.nu_c) {
        d.branch = Branch::Propagating;
        d.beta = std::sqrt(k2 - d.h * d.h);
    } else {
        d.branch = Branch::Localized;
        d.gamma = std::sqrt(d.h * d.h - k2);
    }
    return d;
}

OffsetDispersion dispersion_at_offset(const WaveguideSpec& spec, const ModeIndex& mode, double u,
                                      Branch branch) {
    validate(mode);
    if (!(u > 0.0)) throw DomainError("dispersion_at_offset: u must be positive");
    OffsetDispersion out;
    ModeDispersion& d = out.dispersion;
    d.h = transverse_wavenumber(spec, mode);
    d.nu_c = d.h / spec.index();
    d.branch = branch;
    const double em = spec.eps * spec.mu;
    if (branch == Branch::Propagating) {
        out.nu = d.nu_c + u * u;
        d.beta = u * std::sqrt(em * (out.nu + d.nu_c));
    } else if (branch == Branch::Localized) {
        out.nu = d.nu_c - u * u;
        if (!(out.nu > 0.0)) throw DomainError("dispersion_at_offset: nu must stay positive");
        d.gamma = u * std::sqrt(em * (out.nu + d.nu_c));
    } else {
        throw DomainError("dispersion_at_offset: the cutoff branch has no offset");
    }
    return out;
}

namespace {

struct ZFactor {
    Complex value;    // profile p(z)
    Complex gamma_s;  // -dp/dz / p
};

ZFactor z_factor(const ModeDispersion& d, const Profile& profile, double z) {
    const Complex g = d.gamma_complex();
    switch (profile.kind) {
        case Profile::Kind::Signed:
            return {std::exp(-g * z), g};
        case Profile::Kind::Reversed:
            return {std::exp(g * z), -g};
        case Profile::Kind::Abs: {
            const double dz = z - profile.z0;
            const double sign = dz < 0.0 ? -1.0 : 1.0;
            return {std::exp(-g * std::abs(dz)), sign * g};
        }
    }
    return {1.0, g};
}

}  // namespace

FieldSample field_at(const WaveguideSpec& spec, const ModeIndex& mode, double nu,
                     Complex amplitude, const Vec3& point, const Profile& profile) {
    return field_at(spec, mode, nu, dispersion(spec, mode, nu), amplitude, point, profile);
}

FieldSample field_at(const WaveguideSpec& spec, const ModeIndex& mode, double nu,
                     const ModeDispersion& d, Complex amplitude, const Vec3& point,
                     const Profile& profile) {
    if (profile.kind == Profile::Kind::Abs && d.branch != Branch::Localized) {
        throw DomainError("field_at: the |z - z0| profile needs a localized mode, " +
                          to_string(mode) + " is " + to_string(d.branch));
    }
    const double kx = mode.m * kPi / spec.a;
    const double ky = mode.n * kPi / spec.b;
    const double sx = std::sin(kx * point.x);
    const double cx = std::cos(kx * point.x);
    const double sy = std::sin(ky * point.y);
    const double cy = std::cos(ky * point.y);
    const double h2 = d.h * d.h;
    const auto [p, gs] = z_factor(d, profile, point.z);
    const Complex amp = amplitude * p;
    const Complex i{0.0, 1.0};

    FieldSample out;
    out.position = point;
    if (mode.pol == Polarization::TM) {
        out.E.z = amp * (sx * sy);
        out.E.x = -gs / h2 * kx * amp * (cx * sy);
        out.E.y = -gs / h2 * ky * amp * (sx * cy);
        out.H.x = -i * nu * spec.eps / h2 * ky * amp * (sx * cy);
        out.H.y = i * nu * spec.eps / h2 * kx * amp * (cx * sy);
        out.H.z = 0.0;
    } else {
        out.H.z = amp * (cx * cy);
        out.E.x = -i * nu * spec.mu / h2 * ky * amp * (cx * sy);
        out.E.y = i * nu * spec.mu / h2 * kx * amp * (sx * cy);
        out.H.x = gs / h2 * kx * amp * (sx * cy);
        out.H.y = gs / h2 * ky * amp * (cx * sy);
        out.E.z = 0.0;
    }
    return out;
}

namespace {

void check_stencil(const WaveguideSpec& spec, const Vec3& p, double step, const Profile& profile,
                   const char* who) {
    if (!(step > 0.0)) throw DomainError(std::string(who) + ": step must be positive");
    const double margin = 2.0 * step;
    if (p.x < margin || p.x > spec.a - margin || p.y < margin || p.y > spec.b - margin) {
        throw DomainError(std::string(who) + ": stencil too close to a wall");
    }
    if (profile.kind == Profile::Kind::Abs && std::abs(p.z - profile.z0) < margin) {
        throw DomainError(std::string(who) + ": stencil straddles the z0 kink plane");
    }
}

using Components = std::array<Complex, 6>;

Components components(const FieldSample& f) {
    return {f.E.x, f.E.y, f.E.z, f.H.x, f.H.y, f.H.z};
}

struct Stencil {
    Components centre;
    std::array<Components, 6> neighbours;  // -x, +x, -y, +y, -z, +z
    double e_scale = 0.0;
    double h_scale = 0.0;
};

Stencil sample_stencil(const WaveguideSpec& spec, const ModeIndex& mode, double nu,
                       const Vec3& p, double step, const Profile& profile) {
    Stencil s;
    auto visit = [&](const Vec3& q) {
        const FieldSample f = field_at(spec, mode, nu, 1.0, q, profile);
        s.e_scale = std::max(s.e_scale, std::sqrt(norm_sq(f.E)));
        s.h_scale = std::max(s.h_scale, std::sqrt(norm_sq(f.H)));
        return components(f);
    };
    s.centre = visit(p);
    const std::array<Vec3, 6> offsets{Vec3{-step, 0, 0}, Vec3{step, 0, 0}, Vec3{0, -step, 0},
                                      Vec3{0, step, 0},  Vec3{0, 0, -step}, Vec3{0, 0, step}};
    for (std::size_t k = 0; k < offsets.size(); ++k) {
        s.neighbours[k] = visit({p.x + offsets[k].x, p.y + offsets[k].y, p.z + offsets[k].z});
    }
    return s;
}

}  // namespace

double helmholtz_residual(const WaveguideSpec& spec, const ModeIndex& mode, double nu,
                          const Vec3& point, double step, const Profile& profile) {
    check_stencil(spec, point, step, profile, "helmholtz_residual");
    const double k2 = spec.eps * spec.mu * nu * nu;
    const Stencil s = sample_stencil(spec, mode, nu, point, step, profile);
    double worst = 0.0;
    for (std::size_t c = 0; c < 6; ++c) {
        Complex lap = 0.0;
        for (int axis = 0; axis < 3; ++axis) {
            lap += (s.neighbours[2 * axis][c] - 2.0 * s.centre[c] + s.neighbours[2 * axis + 1][c]) /
                   (step * step);
        }
        const double scale = c < 3 ? s.e_scale : s.h_scale;
        if (scale == 0.0) continue;
        worst = std::max(worst, std::abs(lap + k2 * s.centre[c]) / (k2 * scale));
    }
    return worst;
}

double divergence_residual(const WaveguideSpec& spec, const ModeIndex& mode, double nu,
                           const Vec3& point, double step, const Profile& profile) {
    check_stencil(spec, point, step, profile, "divergence_residual");
    const double k = spec.index() * nu;
    const Stencil s = sample_stencil(spec, mode, nu, point, step, profile);
    if (s.e_scale == 0.0) return 0.0;
    Complex div = 0.0;
    for (int axis = 0; axis < 3; ++axis) {
        div += (s.neighbours[2 * axis + 1][axis] - s.neighbours[2 * axis][axis]) / (2.0 * step);
    }
    return std::abs(div) / (k * s.e_scale);
}

double faraday_residual(const WaveguideSpec& spec, const ModeIndex& mode, double nu,
                        const Vec3& point, double step, const Profile& profile) {
    check_stencil(spec, point, step, profile, "faraday_residual");
    const double k = spec.index() * nu;
    const Stencil s = sample_stencil(spec, mode, nu, point, step, profile);
    if (s.e_scale == 0.0) return 0.0;
    // d[axis][c]: derivative of component c along axis.
    auto d = [&](int axis, int c) {
        return (s.neighbours[2 * axis + 1][c] - s.neighbours[2 * axis][c]) / (2.0 * step);
    };
    const Complex i{0.0, 1.0};
    const std::array<Complex, 3> curl{d(1, 2) - d(2, 1), d(2, 0) - d(0, 2), d(0, 1) - d(1, 0)};
    double worst = 0.0;
    for (int c = 0; c < 3; ++c) {
        const Complex rhs = i * nu * spec.mu * s.centre[3 + c];
        worst = std::max(worst, std::abs(curl[c] - rhs) / (k * s.e_scale));
    }
    return worst;
}

std::vector<ModeIndex> enumerate_modes(int max_mn) {
    std::vector<ModeIndex> out;
    for (Polarization pol : {Polarization::TE, Polarization::TM}) {
        const int start = pol == Polarization::TM ? 1 : 0;
        for (int m = start; m <= max_mn; ++m) {
            for (int n = start; n <= max_mn; ++n) {
                if (pol == Polarization::TE && m == 0 && n == 0) continue;
                out.push_back({pol, m, n});
            }
        }
    }
    return out;
}

std::vector<ModeIndex> modes_by_cutoff(const WaveguideSpec& spec, int max_mn) {
    auto out = enumerate_modes(max_mn);
    std::stable_sort(out.begin(), out.end(), [&](const ModeIndex& l, const ModeIndex& r) {
        return transverse_wavenumber(spec, l) < transverse_wavenumber(spec, r);
    });
    return out;
}

}  // namespace wgqed
