// SPDX-License-Identifier: Apache-2.0

#include "polarcat/scenarios.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

#include "polarcat/io.hpp"

namespace polarcat {

namespace {

std::string num(double v) {
    std::ostringstream ss;
    ss.precision(6);
    ss << v;
    return ss.str();
}

/// Target superposition N(a* alpha |Theta+> + b* beta |Theta->) of Eq-style
/// closed forms, built from given cat amplitudes.
FockVector cat_superposition(cplx c_plus, cplx c_minus, double gamma_plus,
                             double gamma_minus, int cutoff) {
    FockVector tp = cat_state(gamma_plus, CatParity::plus, cutoff, "C");
    FockVector tm = cat_state(gamma_minus, CatParity::minus, cutoff, "C");
    FockVector out = tp;
    out.amps() = c_plus * tp.amps() + c_minus * tm.amps();
    return out.normalize();
}

struct FittedBasis {
    CatFit plus;
    CatFit minus;
};

/// Best-fit cat amplitudes of the pipeline's own heralded basis states.
FittedBasis fitted_basis(const HybridState& omega, const ProtocolParams& p) {
    auto [rho_h, ph] = remote_state_prep(omega, PolarizationProjector(1, 0, "HA", "VA"));
    auto [rho_v, pv] = remote_state_prep(omega, PolarizationProjector(0, 1, "HA", "VA"));
    (void)ph;
    (void)pv;
    // Conditional states are pure here; lift the dominant eigenvector.
    auto principal = [](const DensityOperator& rho) {
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(rho.matrix());
        return FockVector(rho.reg(), es.eigenvectors().col(rho.dim() - 1));
    };
    FittedBasis fb;
    fb.plus = best_cat_fit(principal(rho_h), CatParity::plus, 0.02, 1.5);
    fb.minus = best_cat_fit(principal(rho_v), CatParity::minus, 0.02, 1.5);
    (void)p;
    return fb;
}

int run_resource(const ScenarioConfig& cfg, std::ostream& out) {
    HybridState omega = prepare_omega(cfg.protocol);
    DensityOperator resource = extract_resource(omega);
    const double f_me = max_entangled_fidelity(resource);

    const double a = 1.0, b = cfg.protocol.beta_over_alpha;
    const double f_closed = (a + b) * (a + b) / (2.0 * (a * a + b * b));

    FittedBasis fb = fitted_basis(omega, cfg.protocol);

    write_file(cfg.output_dir / "resource_state.json", density_to_json(resource).dump(2));
    nlohmann::json report{
        {"fidelities",
         {{"max_entangled", f_me},
          {"max_entangled_closed_form", f_closed},
          {"cat_fit_plus", fb.plus.fidelity},
          {"cat_fit_minus", fb.minus.fidelity}}},
        {"gamma_plus_fit", fb.plus.gamma},
        {"gamma_minus_fit", fb.minus.gamma},
    };
    write_file(cfg.output_dir / "resource_report.json", report.dump(2));

    out << "scenario=resource f_me=" << num(f_me) << " f_closed=" << num(f_closed)
        << " gamma_plus_fit=" << num(fb.plus.gamma)
        << " gamma_minus_fit=" << num(fb.minus.gamma) << "\n";
    return 0;
}

int run_rsp(const ScenarioConfig& cfg, std::ostream& out) {
    HybridState omega = prepare_omega(cfg.protocol);
    PolarizationProjector proj(cfg.input_a, cfg.input_b, "HA", "VA");
    auto [rho_c, prob] = remote_state_prep(omega, proj);

    // Closed-form target at the pipeline-fitted cat amplitudes.
    FittedBasis fb = fitted_basis(omega, cfg.protocol);
    const double beta = cfg.protocol.beta_over_alpha;
    FockVector target =
        cat_superposition(std::conj(proj.a), std::conj(proj.b) * beta, fb.plus.gamma,
                          fb.minus.gamma, cfg.protocol.cutoff_cv);
    const double f = fidelity(rho_c, target);

    WignerGrid grid;
    write_file(cfg.output_dir / "rsp_state.json", density_to_json(rho_c).dump(2));
    write_file(cfg.output_dir / "rsp_wigner.csv", wigner_to_csv(wigner(rho_c, grid), grid));

    out << "scenario=rsp fidelity=" << num(f) << " prob=" << num(prob)
        << " w00=" << num(wigner_point(rho_c, 0, 0)) << "\n";
    return 0;
}

int run_teleport(const ScenarioConfig& cfg, std::ostream& out) {
    HybridState omega = prepare_omega(cfg.protocol);
    DensityOperator rho_out =
        teleport_realistic(omega, cfg.input_a, cfg.input_b, cfg.protocol);

    FittedBasis fb = fitted_basis(omega, cfg.protocol);
    const double beta = cfg.protocol.beta_over_alpha;
    // Eq-style expected output: N(a beta |Theta-> - b alpha |Theta+>).
    FockVector target =
        cat_superposition(-cfg.input_b, cfg.input_a * beta, fb.plus.gamma,
                          fb.minus.gamma, cfg.protocol.cutoff_cv);
    const double f = fidelity(rho_out, target);

    WignerGrid grid;
    write_file(cfg.output_dir / "teleport_state.json", density_to_json(rho_out).dump(2));
    write_file(cfg.output_dir / "teleport_wigner.csv",
               wigner_to_csv(wigner(rho_out, grid), grid));

    out << "scenario=teleport fidelity=" << num(f)
        << " w00=" << num(wigner_point(rho_out, 0, 0)) << "\n";
    return 0;
}

int run_swap(const ScenarioConfig& cfg, std::ostream& out) {
    HybridState omega = prepare_omega(cfg.protocol);
    DensityOperator pair =
        bell_pair_psi_plus(cfg.protocol.visibility, "HB", "VB", "HD", "VD",
                           cfg.protocol.pol_cutoff);
    auto [swapped, prob] = entanglement_swap(omega, pair, cfg.protocol);
    const DensityOperator& rho = swapped.density();

    const double f_me = max_entangled_fidelity(rho);
    ConditionalTomogramSet conditionals = exact_conditionals(rho);
    EntanglementBound bound =
        entanglement_bound(conditionals, cfg.protocol.gamma_plus, cfg.protocol.gamma_minus);

    write_file(cfg.output_dir / "swap_state.json", density_to_json(rho).dump(2));
    nlohmann::json report{
        {"fidelities", {{"max_entangled", f_me}}},
        {"entanglement_bound", bound.f_lb},
        {"certified", bound.certified},
        {"probability", prob},
    };
    write_file(cfg.output_dir / "swap_report.json", report.dump(2));

    out << "scenario=swap f_me=" << num(f_me) << " f_lb=" << num(bound.f_lb)
        << " certified=" << (bound.certified ? 1 : 0) << " prob=" << num(prob) << "\n";
    return 0;
}

int run_tomo_roundtrip(const ScenarioConfig& cfg, std::ostream& out) {
    // Ground truth: the odd cat at gamma_minus, measured through eta_homodyne.
    FockVector truth =
        cat_state(cfg.protocol.gamma_minus, CatParity::minus, cfg.protocol.cutoff_cv, "C");
    DensityOperator rho_true = truth.to_density();

    auto samples = sample_quadratures(rho_true, cfg.tomo);
    write_file(cfg.output_dir / "tomo_samples.csv", quadratures_to_csv(samples));

    ReconstructionResult rec = maxlik_reconstruct(samples, cfg.tomo);
    const double f = fidelity(rec.rho, truth);
    const double w00 = wigner_point(rec.rho, 0, 0);

    WignerGrid grid;
    write_file(cfg.output_dir / "tomo_reconstructed.json", density_to_json(rec.rho).dump(2));
    write_file(cfg.output_dir / "tomo_wigner.csv",
               wigner_to_csv(wigner(rec.rho, grid), grid));

    out << "scenario=tomo-roundtrip fidelity=" << num(f) << " w00=" << num(w00)
        << " iterations=" << rec.iterations << " converged=" << (rec.converged ? 1 : 0)
        << "\n";
    return 0;
}

int run_rates(const ScenarioConfig& cfg, std::ostream& out) {
    Rates r = rates(cfg.rate);
    nlohmann::json report{{"rates",
                           {{"p_db", r.p_db},
                            {"p_good", r.p_good},
                            {"triple_rate_hz", r.triple_rate_hz}}}};
    write_file(cfg.output_dir / "rates_report.json", report.dump(2));
    out << "scenario=rates p_db=" << r.p_db << " p_good=" << r.p_good
        << " triple_rate_hz=" << r.triple_rate_hz << "\n";
    return 0;
}

int run_bloch_map(const ScenarioConfig& cfg, std::ostream& out) {
    BlochScan scan = mean_bloch_fidelity(cfg.protocol, cfg.n_grid);
    write_file(cfg.output_dir / "bloch_map.csv", bloch_map_to_csv(scan.map));
    nlohmann::json report{{"mean_bloch_fidelity", scan.mean},
                          {"min", scan.min},
                          {"max", scan.max},
                          {"beats_classical", scan.beats_classical}};
    write_file(cfg.output_dir / "bloch_report.json", report.dump(2));
    out << "scenario=bloch-map mean=" << num(scan.mean) << " min=" << num(scan.min)
        << " max=" << num(scan.max)
        << " beats_classical=" << (scan.beats_classical ? 1 : 0) << "\n";
    return 0;
}

}  // namespace

int run_scenario(const ScenarioConfig& config, std::ostream& out) {
    std::filesystem::create_directories(config.output_dir);
    switch (config.scenario) {
        case Scenario::resource: return run_resource(config, out);
        case Scenario::rsp: return run_rsp(config, out);
        case Scenario::teleport: return run_teleport(config, out);
        case Scenario::swap_: return run_swap(config, out);
        case Scenario::tomo_roundtrip: return run_tomo_roundtrip(config, out);
        case Scenario::rates_: return run_rates(config, out);
        case Scenario::bloch_map: return run_bloch_map(config, out);
    }
    throw ConfigError("unknown scenario");
}

}  // namespace polarcat
