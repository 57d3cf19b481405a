// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "polarcat/analysis.hpp"
#include "test_helpers.hpp"

using namespace polarcat;
using polarcat::testing::random_density;
using polarcat::testing::random_state;

namespace {

FockVector fock_n(int n, int cutoff) {
    FockVector v = FockVector::zero(ModeRegister{{"C", cutoff}});
    v.amps()(n) = 1.0;
    return v;
}

/// Pure two-mode resource c_p |H>|Theta+> + c_m |V>|Theta-> over ("A", C).
FockVector me_like(cplx c_p, cplx c_m, double g_plus, double g_minus, int cutoff) {
    FockVector tp = cat_state(g_plus, CatParity::plus, cutoff, "C");
    FockVector tm = cat_state(g_minus, CatParity::minus, cutoff, "C");
    ModeRegister reg = concat(ModeRegister{{"A", 1}}, tp.reg());
    VectorXcd amps(2 * tp.dim());
    amps.segment(0, tp.dim()) = c_p * tp.amps();
    amps.segment(tp.dim(), tp.dim()) = c_m * tm.amps();
    amps /= amps.norm();
    return FockVector(reg, amps);
}

const double kGp = 0.45, kGm = 0.90;

FockVector psi_me(int cutoff) {
    return me_like(1.0, -1.0, kGp, kGm, cutoff);
}

}  // namespace

TEST_CASE("fidelity: basic identities") {
    DensityOperator rho = random_density(ModeRegister{{"C", 6}});
    CHECK(fidelity(rho, rho) == doctest::Approx(1.0).epsilon(1e-9));

    CHECK(fidelity(fock_n(0, 4), fock_n(1, 4)) == doctest::Approx(0.0));

    for (int i = 0; i < 8; ++i) {
        FockVector a = random_state(ModeRegister{{"C", 6}});
        FockVector b = random_state(ModeRegister{{"C", 6}});
        const double pure = std::norm(overlap(a, b));
        CHECK(fidelity(a.to_density(), b.to_density()) ==
              doctest::Approx(pure).epsilon(1e-10).scale(1.0));
        // symmetric in its arguments
        DensityOperator r1 = random_density(ModeRegister{{"C", 6}});
        DensityOperator r2 = random_density(ModeRegister{{"C", 6}}, 2);
        CHECK(fidelity(r1, r2) == doctest::Approx(fidelity(r2, r1)).epsilon(1e-9));
    }
}

TEST_CASE("fidelity: squeezed vacuum is an excellent low-amplitude even cat") {
    FockVector sv = squeezed_vacuum(0.18, 14);
    CHECK(fidelity(sv, cat_state(0.45, CatParity::plus, 14)) >= 0.995);

    CatFit fit = best_cat_fit(sv, CatParity::plus);
    CHECK(fit.fidelity >= 0.995);
    CHECK(fit.gamma == doctest::Approx(0.4244).epsilon(0.01));
}

TEST_CASE("exact conditionals invert assemble_two_mode on random states") {
    for (int i = 0; i < 12; ++i) {
        ModeRegister reg{{"A", 1}, {"C", 4}};
        // well-conditioned draws keep the fidelity evaluation itself exact
        DensityOperator rho = random_density(reg, 2 * int(reg.dim()));
        AssemblyResult res = assemble_two_mode(exact_conditionals(rho));
        CHECK(fidelity(res.rho, rho) >= 1.0 - 1e-9);
        CHECK(res.clipped_mass == doctest::Approx(0.0).epsilon(1e-9));
        CHECK((res.rho.matrix() - rho.matrix()).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("assembly reproduces the ideal resource") {
    FockVector r = me_like(1.0, 1.0, kGp, kGm, 10);
    AssemblyResult res = assemble_two_mode(exact_conditionals(r.to_density()));
    CHECK(fidelity(res.rho, r) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("assembly requires all six conditionals") {
    FockVector r = me_like(1.0, 1.0, kGp, kGm, 10);
    ConditionalTomogramSet set = exact_conditionals(r.to_density());
    set.entries.erase(Pol::L);
    CHECK_THROWS_AS(assemble_two_mode(set), MissingProjection);
}

TEST_CASE("entanglement bound: maximally entangled and product benchmarks") {
    FockVector me = psi_me(12);
    EntanglementBound b = entanglement_bound(exact_conditionals(me.to_density()), kGp, kGm);
    CHECK(b.f_lb == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(b.certified);
    CHECK(b.raw_overlap(0, 1) == doctest::Approx(0.0).epsilon(1e-12));

    FockVector product = me_like(1.0, 0.0, kGp, kGm, 12);
    EntanglementBound pb =
        entanglement_bound(exact_conditionals(product.to_density()), kGp, kGm);
    CHECK(pb.f_lb <= 0.5 + 1e-9);

    // mixing noise into the product state pushes the bound strictly below 1/2
    DensityOperator noisy = product.to_density();
    noisy.matrix() = 0.9 * noisy.matrix() +
                     0.1 * MatrixXcd::Identity(noisy.dim(), noisy.dim()) / double(noisy.dim());
    EntanglementBound nb = entanglement_bound(exact_conditionals(noisy), kGp, kGm);
    CHECK(nb.f_lb < 0.5);
    CHECK_FALSE(nb.certified);
}

TEST_CASE("entanglement bound never exceeds the true fidelity") {
    FockVector me = psi_me(9);
    for (int i = 0; i < 25; ++i) {
        ModeRegister reg{{"A", 1}, {"C", 9}};
        DensityOperator rho = random_density(reg, i % 3 + 1);
        const double truth = fidelity(rho, me);
        EntanglementBound b = entanglement_bound(exact_conditionals(rho), kGp, kGm);
        CHECK(b.f_lb <= truth + 1e-9);
    }
}

TEST_CASE("max_entangled_fidelity matches the closed form on pure resources") {
    for (double beta : {0.3, 0.6, 1.0}) {
        FockVector r = me_like(1.0, beta, kGp, kGm, 10);
        const double expect = (1 + beta) * (1 + beta) / (2 * (1 + beta * beta));
        CHECK(max_entangled_fidelity(r.to_density()) ==
              doctest::Approx(expect).epsilon(1e-10));
    }
}

TEST_CASE("bloch mean: ideal limits and reference defaults") {
    ProtocolParams ideal;
    ideal.beta_over_alpha = 1.0;
    ideal.ratio_pdb_pgood_at_H = 0.0;
    BlochScan perfect = mean_bloch_fidelity(ideal, 1000);
    CHECK(perfect.mean == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(perfect.min == doctest::Approx(1.0).epsilon(1e-12));

    ProtocolParams defaults;  // reference experimental parameters
    BlochScan scan = mean_bloch_fidelity(defaults, 10000);
    CHECK(scan.mean == doctest::Approx(0.7764).epsilon(0.004));
    CHECK(scan.mean > 2.0 / 3.0);
    CHECK(scan.beats_classical);
    CHECK(scan.min <= scan.mean);
    CHECK(scan.mean <= scan.max);
    CHECK(scan.min == doctest::Approx(0.5).epsilon(0.01));
    CHECK(scan.max == doctest::Approx(1.0).epsilon(0.01));

    // invariant under the phi origin (the model depends on |a|^2 only)
    BlochScan shifted = mean_bloch_fidelity(defaults, 10000, 1.2345);
    CHECK(std::abs(shifted.mean - scan.mean) < 1e-3);

    CHECK(scan.map.size() >= 10000);
    CHECK_THROWS_AS(mean_bloch_fidelity(defaults, 50), DimensionMismatch);
}

TEST_CASE("rates: Methods numbers and scaling laws") {
    RateParams p;  // defaults are the Methods numbers, input |H>
    Rates at_h = rates(p);
    CHECK(at_h.p_db == doctest::Approx(4.155e-11).epsilon(1e-3));
    // rounds to 4e-11 at one significant figure
    CHECK(std::abs(at_h.p_db - 4e-11) < 0.5e-11);
    CHECK(at_h.p_good == doctest::Approx(4.155e-11).epsilon(1e-3));

    RateParams pv = p;
    pv.a = 0.0;
    pv.b = 1.0;
    Rates at_v = rates(pv);
    CHECK(at_v.p_good == doctest::Approx(1.2465e-10).epsilon(1e-3));

    // triple rates straddle the quoted range ends
    CHECK(at_h.triple_rate_hz == doctest::Approx(6.3e-3).epsilon(0.01));
    CHECK(at_v.triple_rate_hz == doctest::Approx(1.263e-2).epsilon(0.01));

    RateParams doubled = p;
    doubled.R_B *= 2.0;
    Rates d = rates(doubled);
    CHECK(d.p_db == doctest::Approx(4.0 * at_h.p_db).epsilon(1e-12));
    CHECK(d.p_good == doctest::Approx(2.0 * at_h.p_good).epsilon(1e-12));
}

TEST_CASE("inconsistent basis probability totals are rejected") {
    FockVector r = me_like(1.0, 1.0, kGp, kGm, 10);
    ConditionalTomogramSet set = exact_conditionals(r.to_density());
    set.entries.at(Pol::D).second *= 2.0;
    CHECK_THROWS_AS(assemble_two_mode(set), DimensionMismatch);
    CHECK_THROWS_AS(entanglement_bound(set, kGp, kGm), DimensionMismatch);
}
