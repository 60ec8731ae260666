#include "wgqed/detection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wgqed/errors.hpp"
#include "wgqed/numerics.hpp"

namespace wgqed {

std::string to_string(RadicandModel model) {
    return model == RadicandModel::PaperLiteral ? "paper-literal" : "consistent-dispersion";
}

namespace {

double radicand_scale(const WaveguideSpec& spec, RadicandModel model) {
    return model == RadicandModel::PaperLiteral ? spec.index() : spec.eps * spec.mu;
}

}  // namespace

DetectionPole pole(const WaveguideSpec& spec, double omega_tilde, double gamma_eff,
                   RadicandModel model) {
    validate(spec);
    if (!(gamma_eff >= 0.0)) throw DomainError("pole: gamma_eff must be >= 0");
    if (!std::isfinite(omega_tilde)) throw DomainError("pole: omega_tilde must be finite");
    const double s = radicand_scale(spec, model);
    const double h = kPi / spec.a;
    DetectionPole p;
    p.omega_tilde = omega_tilde;
    p.gamma_eff = gamma_eff;
    p.model = model;
    p.A = s * (omega_tilde * omega_tilde - 0.25 * gamma_eff * gamma_eff) - h * h;
    p.B = 0.5 * s * omega_tilde * gamma_eff;
    if (p.B == 0.0 && p.A <= 0.0) {
        throw PurelyEvanescentError(
            "pole: A = " + std::to_string(p.A) +
            " <= 0 with B = 0 leaves no root with beta_r > 0 (purely evanescent)");
    }
    const double R = std::hypot(p.A, 2.0 * p.B);
    if (p.A > 0.0) {
        p.beta_r = std::sqrt(0.5 * (p.A + R));
        p.beta_i = -p.B / p.beta_r;
    } else {
        p.beta_i = -std::sqrt(0.5 * (R - p.A));
        p.beta_r = p.B / -p.beta_i;
    }
    if (p.beta_i == 0.0) p.beta_i = 0.0;  // no negative zero
    p.gamma_spa = 2.0 * p.beta_i;
    return p;
}

double pole_identity_residual(const DetectionPole& p) {
    const Complex beta{p.beta_r, p.beta_i};
    const Complex target{p.A, -2.0 * p.B};
    return std::abs(beta * beta - target) / std::abs(target);
}

namespace {

bool on_wall(const WaveguideSpec& spec, double x) { return x <= 0.0 || x >= spec.a; }

bool in_cone(const WaveguideSpec& spec, double dz, double t) { return t >= spec.index() * dz; }

}  // namespace

Complex correlation_amplitude(const WaveguideSpec& spec, const Atom& atom, const DetectionPole& p,
                              const Vec3& point, double t) {
    const double dz = std::abs(point.z - atom.r0.z);
    if (!in_cone(spec, dz, t) || on_wall(spec, point.x)) return {0.0, 0.0};
    const double wt = p.omega_tilde;
    const double h = kPi / spec.a;
    const Complex i{0.0, 1.0};
    const Complex front = i * (wt * spec.index() * std::conj(atom.dipole.y)) /
                          (kPi * kPi * spec.eps * spec.area());
    const Complex ratio = wt / numerics::principal_csqrt(Complex{h * h - wt * wt, 0.0});
    const double shape = std::sin(kPi * atom.r0.x / spec.a) * std::sin(kPi * point.x / spec.a);
    const Complex phase =
        std::exp(i * p.beta_r * dz + p.beta_i * dz - i * wt * t - 0.5 * p.gamma_eff * t);
    return front * ratio * shape * phase;
}

double correlation_closed_form(const WaveguideSpec& spec, const Atom& atom,
                               const DetectionPole& p, const Vec3& point, double t) {
    const double dz = std::abs(point.z - atom.r0.z);
    if (!in_cone(spec, dz, t) || on_wall(spec, point.x)) return 0.0;
    const double wt = p.omega_tilde;
    const double h = kPi / spec.a;
    const double front =
        std::norm(wt * spec.index() * atom.dipole.y / (kPi * kPi * spec.eps * spec.area()));
    const double ratio = std::abs(wt * wt / (h * h - wt * wt));
    const double sx = std::sin(kPi * point.x / spec.a);
    const double sx0 = std::sin(kPi * atom.r0.x / spec.a);
    return front * ratio * sx * sx * sx0 * sx0 * std::exp(p.gamma_spa * dz - p.gamma_eff * t);
}

CorrelationGrid correlation_grid(const WaveguideSpec& spec, const Atom& atom,
                                 const DetectionPole& p, const std::vector<double>& xs,
                                 const std::vector<double>& zs, const std::vector<double>& ts,
                                 double y, DosModel dos) {
    validate(spec, atom);
    CorrelationGrid g;
    g.xs = xs;
    g.zs = zs;
    g.ts = ts;
    g.y = y;
    g.pole = p;
    g.spec = spec;
    g.atom = atom;
    g.dos = dos;
    g.values.assign(xs.size() * zs.size() * ts.size(), 0.0);
    g.inside_cone.assign(zs.size() * ts.size(), 0);
    for (std::size_t iz = 0; iz < zs.size(); ++iz) {
        for (std::size_t it = 0; it < ts.size(); ++it) {
            g.inside_cone[iz * ts.size() + it] = in_cone(spec, std::abs(zs[iz] - atom.r0.z), ts[it]);
        }
    }
    const std::size_t rows = xs.size() * zs.size();
    std::vector<double> row_discrepancy(rows, 0.0);
    numerics::parallel_for(rows, [&](std::size_t row) {
        const std::size_t ix = row / zs.size();
        const std::size_t iz = row % zs.size();
        const Vec3 point{xs[ix], y, zs[iz]};
        for (std::size_t it = 0; it < ts.size(); ++it) {
            const double v = std::norm(correlation_amplitude(spec, atom, p, point, ts[it]));
            const double c = correlation_closed_form(spec, atom, p, point, ts[it]);
            g.values[g.index(ix, iz, it)] = v;
            const double scale = std::max(std::abs(v), std::abs(c));
            if (scale > 0.0) {
                row_discrepancy[row] = std::max(row_discrepancy[row], std::abs(v - c) / scale);
            }
        }
    });
    g.max_closed_form_discrepancy =
        *std::max_element(row_discrepancy.begin(), row_discrepancy.end());
    return g;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw DomainError("fit_line: need at least two (x, y) pairs");
    }
    const double n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw DomainError("fit_line: x values are all equal");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.points = x.size();
    for (std::size_t i = 0; i < x.size(); ++i) {
        f.max_residual = std::max(f.max_residual, std::abs(y[i] - f.intercept - f.slope * x[i]));
    }
    return f;
}

namespace {

std::size_t nearest(const std::vector<double>& xs, double target) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (std::abs(xs[i] - target) < std::abs(xs[best] - target)) best = i;
    }
    return best;
}

}  // namespace

DecayFits fit_decay_slopes(const CorrelationGrid& grid) {
    if (grid.xs.empty() || grid.zs.empty() || grid.ts.empty()) {
        throw DomainError("fit_decay_slopes: empty grid");
    }
    const std::size_t ix = nearest(grid.xs, 0.5 * grid.spec.a);
    const std::size_t iz = nearest(grid.zs, grid.atom.r0.z);
    const std::size_t it = grid.ts.size() - 1;

    std::vector<double> tx;
    std::vector<double> ty;
    for (std::size_t k = 0; k < grid.ts.size(); ++k) {
        const double v = grid.at(ix, iz, k);
        if (grid.inside_cone[iz * grid.ts.size() + k] && v > 0.0) {
            tx.push_back(grid.ts[k]);
            ty.push_back(std::log(v));
        }
    }
    std::vector<double> zx;
    std::vector<double> zy;
    for (std::size_t k = 0; k < grid.zs.size(); ++k) {
        const double v = grid.at(ix, k, it);
        if (grid.inside_cone[k * grid.ts.size() + it] && v > 0.0) {
            zx.push_back(std::abs(grid.zs[k] - grid.atom.r0.z));
            zy.push_back(std::log(v));
        }
    }
    DecayFits out;
    out.temporal = fit_line(tx, ty);
    out.spatial = fit_line(zx, zy);
    out.ratio = out.spatial.slope / out.temporal.slope;
    return out;
}

double decay_ratio(const WaveguideSpec& spec, double omega_tilde, double gamma_eff,
                   RadicandModel model) {
    if (!(gamma_eff > 0.0)) throw DomainError("decay_ratio: gamma_eff must be positive");
    return std::abs(pole(spec, omega_tilde, gamma_eff, model).gamma_spa) / gamma_eff;
}

RatioCrossing ratio_crossing(const WaveguideSpec& spec, double gamma_eff, double target,
                             RadicandModel model, const ScanSpec& scan) {
    if (!(gamma_eff > 0.0)) throw DomainError("ratio_crossing: gamma_eff must be positive");
    if (scan.points < 2 || !(scan.lo_factor > 0.0) || !(scan.hi_factor > scan.lo_factor)) {
        throw DomainError("ratio_crossing: invalid scan");
    }
    const double h = kPi / spec.a;
    const double log_lo = std::log(scan.lo_factor * h);
    const double log_hi = std::log(scan.hi_factor * h);
    RatioCrossing out;
    out.target = target;
    out.ratio_min = std::numeric_limits<double>::infinity();
    out.ratio_max = -std::numeric_limits<double>::infinity();
    double prev_w = 0.0;
    double prev_g = 0.0;
    bool have_bracket = false;
    for (int k = 0; k < scan.points; ++k) {
        const double w = std::exp(log_lo + (log_hi - log_lo) * k / (scan.points - 1));
        const double r = decay_ratio(spec, w, gamma_eff, model);
        out.ratio_min = std::min(out.ratio_min, r);
        out.ratio_max = std::max(out.ratio_max, r);
        const double g = r - target;
        if (k > 0 && (g > 0.0) != (prev_g > 0.0)) {
            ++out.crossings;
            if (!have_bracket) {
                out.bracket_lo = prev_w;
                out.bracket_hi = w;
                have_bracket = true;
            }
        }
        prev_w = w;
        prev_g = g;
    }
    if (!have_bracket) {
        throw NoCrossingError("ratio_crossing: |Gamma_spa|/Gamma_eff stays within [" +
                                  std::to_string(out.ratio_min) + ", " +
                                  std::to_string(out.ratio_max) + "] and never reaches " +
                                  std::to_string(target),
                              out.ratio_min, out.ratio_max);
    }
    out.root = numerics::find_root(
        [&](double w) { return decay_ratio(spec, w, gamma_eff, model) - target; }, out.bracket_lo,
        out.bracket_hi);
    return out;
}

double omega_d_closed_form(const WaveguideSpec& spec, double gamma_eff) {
    const double em = spec.eps * spec.mu;
    const double h2 = (kPi / spec.a) * (kPi / spec.a);
    const double g2 = gamma_eff * gamma_eff;
    const double num = em * em * g2 * g2 + 12.0 * em * g2 * h2 + 4.0 * h2 * h2;
    const double den = 8.0 * (em * g2 + 2.0 * h2) * em;
    return std::sqrt(num / den);
}

OmegaD omega_d(const WaveguideSpec& spec, double gamma_eff, RadicandModel model,
               const ScanSpec& scan) {
    validate(spec);
    OmegaD out;
    out.closed_form = omega_d_closed_form(spec, gamma_eff);
    out.crossing = ratio_crossing(spec, gamma_eff, spec.index(), model, scan);
    out.root_found = out.crossing.root;
    out.discrepancy = std::abs(out.closed_form - out.root_found) / out.root_found;
    return out;
}

double vacuum_decay_rate(const FreeSpaceParams& fsp) {
    if (!(fsp.eps0 > 0.0) || !(fsp.c > 0.0)) throw DomainError("free space: eps0, c must be > 0");
    const double w3 = fsp.omega * fsp.omega * fsp.omega;
    return 4.0 * w3 * fsp.dipole * fsp.dipole /
           (4.0 * kPi * fsp.eps0 * 3.0 * kHbar * fsp.c * fsp.c * fsp.c);
}

double free_space_g1(const FreeSpaceParams& fsp, const Vec3& r, const Vec3& r0, double t) {
    const double dr = std::hypot(r.x - r0.x, r.y - r0.y, r.z - r0.z);
    if (!(dr > 0.0)) throw DomainError("free_space_g1: r coincides with the atom");
    const double retarded = t - dr / fsp.c;
    if (retarded < 0.0) return 0.0;
    const double e0 = -fsp.omega * fsp.omega * fsp.dipole * std::sin(fsp.eta) /
                      (4.0 * kPi * fsp.eps0 * fsp.c * fsp.c * dr);
    return e0 * e0 / (dr * dr) * std::exp(-vacuum_decay_rate(fsp) * retarded);
}

}  // namespace wgqed
