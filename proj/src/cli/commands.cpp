#include "wgqed/cli/commands.hpp"

#include <cmath>

#include "wgqed/numerics.hpp"

namespace wgqed::cli {

namespace {

Json mode_json(const ModeIndex& m) {
    return {{"pol", to_string(m.pol)}, {"m", m.m}, {"n", m.n}};
}

std::vector<Cell> mode_cells(const ModeIndex& m) {
    return {to_string(m.pol), static_cast<long long>(m.m), static_cast<long long>(m.n)};
}

}  // namespace

Artifact cmd_modes(const RunConfig& cfg) {
    validate(cfg.waveguide, cfg.atom);
    Artifact a;
    a.command = "modes";
    a.columns = {"pol", "m", "n", "h", "nu_c", "branch"};
    Json rows = Json::array();
    for (const ModeIndex& m : modes_by_cutoff(cfg.waveguide, cfg.max_mn)) {
        const ModeDispersion d = dispersion(cfg.waveguide, m, cfg.atom.omega);
        auto cells = mode_cells(m);
        cells.push_back(d.h);
        cells.push_back(d.nu_c);
        cells.push_back(to_string(d.branch));
        a.rows.push_back(cells);
        Json row = mode_json(m);
        row["h"] = d.h;
        row["nu_c"] = d.nu_c;
        row["branch"] = to_string(d.branch);
        rows.push_back(row);
    }
    a.data["omega"] = cfg.atom.omega;
    a.data["modes"] = rows;
    return a;
}

Artifact cmd_decay(const RunConfig& cfg) {
    validate(cfg.waveguide, cfg.atom);
    const EmissionOptions opts = cfg.emission_options();
    EmissionResult e = decay_rate(cfg.waveguide, cfg.atom, cfg.max_mn, opts);
    const LevelShift shift =
        level_shift(cfg.waveguide, cfg.atom, cfg.max_mn, cfg.shift_window(), opts);
    apply_level_shift(e, shift);

    Artifact a;
    a.command = "decay";
    a.columns = {"quantity", "pol", "m", "n", "value"};
    auto summary = [&](const std::string& name, double v) {
        a.rows.push_back({name, std::string{}, std::string{}, std::string{}, v});
    };
    summary("gamma_eff", e.gamma_eff);
    summary("delta_omega", e.delta_omega);
    summary("omega_tilde", e.omega_tilde);
    summary("oscillatory", e.oscillatory ? 1.0 : 0.0);
    Json gamma_parts = Json::array();
    for (const auto& c : e.contributions) {
        auto cells = mode_cells(c.mode);
        cells.insert(cells.begin(), std::string("gamma_partial"));
        cells.push_back(c.value);
        a.rows.push_back(cells);
        Json j = mode_json(c.mode);
        j["gamma_partial"] = c.value;
        gamma_parts.push_back(j);
    }
    Json shift_parts = Json::array();
    for (const auto& c : shift.contributions) {
        auto cells = mode_cells(c.mode);
        cells.insert(cells.begin(), std::string("shift_partial"));
        cells.push_back(c.value);
        a.rows.push_back(cells);
        Json j = mode_json(c.mode);
        j["delta_omega_partial"] = c.value;
        shift_parts.push_back(j);
    }
    a.data["omega"] = e.omega;
    a.data["gamma_eff"] = e.gamma_eff;
    a.data["delta_omega"] = e.delta_omega;
    a.data["omega_tilde"] = e.omega_tilde;
    a.data["oscillatory"] = e.oscillatory;
    a.data["direction_multiplicity"] = e.direction_multiplicity;
    a.data["contributions"] = gamma_parts;
    a.data["shift"] = {{"window",
                        {{"nu_min", shift.window.nu_min},
                         {"nu_max", shift.window.nu_max},
                         {"half_width", shift.window.half_width}}},
                       {"contributions", shift_parts}};
    a.oracle["shift_window"] = {shift.window.nu_min, shift.window.nu_max};
    return a;
}

Artifact cmd_corr(const RunConfig& cfg) {
    const WaveguideSpec& spec = cfg.waveguide;
    validate(spec, cfg.atom);
    const EmissionOptions opts = cfg.emission_options();
    EmissionResult e = decay_rate(spec, cfg.atom, cfg.max_mn, opts);
    if (!(e.gamma_eff > 0.0)) {
        throw DomainError("corr: no propagating mode at omega, Gamma_eff = 0");
    }
    double target_root = 0.0;
    switch (cfg.corr_omega_tilde) {
        case OmegaTildeMode::Bare:
            break;
        case OmegaTildeMode::Shifted:
            apply_level_shift(e, level_shift(spec, cfg.atom, cfg.max_mn, cfg.shift_window(), opts));
            break;
        case OmegaTildeMode::Target: {
            const ScanSpec scan{cfg.omegad_scan_lo, cfg.omegad_scan_hi, cfg.omegad_scan_points};
            target_root =
                ratio_crossing(spec, e.gamma_eff, cfg.corr_target_ratio, cfg.radicand, scan).root;
            e.omega_tilde = target_root;
            break;
        }
    }
    check_single_mode_dominance(spec, e.omega_tilde, cfg.max_mn);
    const DetectionPole p = pole(spec, e.omega_tilde, e.gamma_eff, cfg.radicand);

    const double t_span = cfg.corr_t_span > 0.0 ? cfg.corr_t_span : 5.0 / e.gamma_eff;
    const double z_span = cfg.corr_z_span > 0.0 ? cfg.corr_z_span : t_span / spec.index();
    const std::vector<double> xs = cfg.corr_x_count == 1
                                       ? std::vector<double>{0.5 * spec.a}
                                       : numerics::linspace(0.0, spec.a, cfg.corr_x_count);
    const std::vector<double> zs =
        numerics::linspace(cfg.atom.r0.z, cfg.atom.r0.z + z_span, cfg.corr_z_count);
    const std::vector<double> ts = numerics::linspace(0.0, t_span, cfg.corr_t_count);
    const double y = cfg.corr_y ? *cfg.corr_y : 0.5 * spec.b;
    const CorrelationGrid g = correlation_grid(spec, cfg.atom, p, xs, zs, ts, y, cfg.dos);
    const DecayFits fits = fit_decay_slopes(g);

    Artifact a;
    a.command = "corr";
    a.columns = {"x", "z", "t", "G1", "inside_cone"};
    a.rows.reserve(g.values.size());
    for (std::size_t ix = 0; ix < xs.size(); ++ix) {
        for (std::size_t iz = 0; iz < zs.size(); ++iz) {
            for (std::size_t it = 0; it < ts.size(); ++it) {
                a.rows.push_back({xs[ix], zs[iz], ts[it], g.at(ix, iz, it),
                                  static_cast<long long>(g.inside_cone[iz * ts.size() + it])});
            }
        }
    }
    Json fit_doc;
    fit_doc["temporal_slope"] = fits.temporal.slope;
    fit_doc["spatial_slope"] = fits.spatial.slope;
    fit_doc["slope_ratio"] = fits.ratio;
    fit_doc["abs_gamma_spa_over_gamma_eff"] = std::abs(p.gamma_spa) / e.gamma_eff;
    fit_doc["temporal_fit_max_residual"] = fits.temporal.max_residual;
    fit_doc["spatial_fit_max_residual"] = fits.spatial.max_residual;
    fit_doc["gamma_eff"] = e.gamma_eff;
    fit_doc["gamma_spa"] = p.gamma_spa;
    fit_doc["omega_tilde"] = e.omega_tilde;
    fit_doc["omega_tilde_mode"] = to_string(cfg.corr_omega_tilde);
    if (cfg.corr_omega_tilde == OmegaTildeMode::Target) fit_doc["target_ratio"] = cfg.corr_target_ratio;
    fit_doc["beta_r"] = p.beta_r;
    fit_doc["beta_i"] = p.beta_i;
    fit_doc["A"] = p.A;
    fit_doc["B"] = p.B;
    fit_doc["radicand"] = to_string(p.model);
    fit_doc["closed_form_max_rel_discrepancy"] = g.max_closed_form_discrepancy;
    a.sidecar = fit_doc;
    a.oracle["closed_form_max_rel_discrepancy"] = g.max_closed_form_discrepancy;

    a.data["fits"] = fit_doc;
    a.data["grid"] = {{"x", xs}, {"z", zs}, {"t", ts}, {"y", y}, {"G1", g.values}};
    std::vector<int> cone(g.inside_cone.begin(), g.inside_cone.end());
    a.data["grid"]["inside_cone"] = cone;
    return a;
}

OmegaDOutcome cmd_omegad(const RunConfig& cfg) {
    validate(cfg.waveguide, cfg.atom);
    double gamma = cfg.omegad_gamma_eff;
    if (!(gamma > 0.0)) {
        gamma = decay_rate(cfg.waveguide, cfg.atom, cfg.max_mn, cfg.emission_options()).gamma_eff;
    }
    if (!(gamma > 0.0)) throw DomainError("omegad: Gamma_eff = 0, no propagating mode at omega");
    const ScanSpec scan{cfg.omegad_scan_lo, cfg.omegad_scan_hi, cfg.omegad_scan_points};

    OmegaDOutcome out;
    Artifact& a = out.artifact;
    a.command = "omegad";
    a.columns = {"radicand",  "status",     "closed_form", "root_found", "discrepancy",
                 "crossings", "bracket_lo", "bracket_hi",  "ratio_min",  "ratio_max"};
    Json reports = Json::array();
    const double closed = omega_d_closed_form(cfg.waveguide, gamma);
    for (RadicandModel model : {RadicandModel::PaperLiteral, RadicandModel::ConsistentDispersion}) {
        Json r;
        r["radicand"] = to_string(model);
        r["closed_form"] = closed;
        try {
            const OmegaD od = omega_d(cfg.waveguide, gamma, model, scan);
            r["status"] = "ok";
            r["root_found"] = od.root_found;
            r["discrepancy"] = od.discrepancy;
            r["crossings"] = od.crossing.crossings;
            r["bracket"] = {od.crossing.bracket_lo, od.crossing.bracket_hi};
            r["ratio_range"] = {od.crossing.ratio_min, od.crossing.ratio_max};
            a.rows.push_back({to_string(model), std::string("ok"), closed, od.root_found,
                              od.discrepancy, static_cast<long long>(od.crossing.crossings),
                              od.crossing.bracket_lo, od.crossing.bracket_hi,
                              od.crossing.ratio_min, od.crossing.ratio_max});
        } catch (const NoCrossingError& e) {
            r["status"] = "no-crossing";
            r["crossings"] = 0;
            r["ratio_range"] = {e.lo_value(), e.hi_value()};
            r["message"] = e.what();
            a.rows.push_back({to_string(model), std::string("no-crossing"), closed, std::string{},
                              std::string{}, 0LL, std::string{}, std::string{}, e.lo_value(),
                              e.hi_value()});
            if (model == cfg.radicand) out.no_crossing = true;
        }
        reports.push_back(r);
    }
    a.data["gamma_eff"] = gamma;
    a.data["target_ratio"] = cfg.waveguide.index();
    a.data["scan"] = {{"lo", scan.lo_factor * kPi / cfg.waveguide.a},
                      {"hi", scan.hi_factor * kPi / cfg.waveguide.a},
                      {"points", scan.points}};
    a.data["reports"] = reports;
    for (const auto& r : reports) {
        if (r.contains("discrepancy")) {
            a.oracle[r["radicand"].get<std::string>() + "_discrepancy"] = r["discrepancy"];
        }
    }
    return out;
}

}  // namespace wgqed::cli
