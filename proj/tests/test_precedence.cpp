#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "common.hpp"
#include "mchr/precedence.hpp"
#include "mchr/simulate.hpp"

using namespace mchr;
using namespace mchr::testing;

namespace {

/// P(die a < die b) after the 10 - v map: P(face of a > face of b), by enumeration.
double dice_oracle(int a, int b) {
  int wins = 0;
  for (int x : dice_faces()[static_cast<std::size_t>(a)])
    for (int y : dice_faces()[static_cast<std::size_t>(b)]) wins += x > y;
  return wins / 36.0;
}

const ConditionVerdict& verdict(const std::vector<ConditionVerdict>& v, const std::string& name) {
  for (const auto& c : v)
    if (c.name == name) return c;
  FAIL("missing verdict " << name);
  return v.front();
}

}  // namespace

TEST_SUITE("pairwise") {
  TEST_CASE("sp_pair examples") {
    CHECK(sp_pair(exponentials({2.0, 1.0}), 0, 1).value == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(sp_pair(atom_uniforms(), 0, 1).value == doctest::Approx(0.55).epsilon(1e-12));
    CHECK(sp_pair(ModelSpec(FrailtyExpModel{{2.5, 1.0}, GammaLaw{3.0, 2.0}}), 0, 1).value ==
          doctest::Approx(2.5 / 3.5).epsilon(1e-12));
  }

  TEST_CASE("matrix examples and antisymmetry") {
    const SpMatrix e = sp_matrix(exponentials({1.0, 2.0, 3.0}));
    CHECK(e.at(2, 1) > 0.5);
    CHECK(e.at(2, 0) > 0.5);
    CHECK(e.at(1, 0) > 0.5);
    CHECK(e.at(2, 0) == doctest::Approx(0.75));

    const SpMatrix sym = sp_matrix(exchangeable_thls(3));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (i != j) CHECK(sym.at(i, j) == doctest::Approx(0.5).epsilon(1e-12));

    Gen g(41);
    for (int rep = 0; rep < 12; ++rep) {
      const ModelSpec m = g.of_kind(static_cast<ModelKind>(rep % 4), 3);
      const SpMatrix sp = sp_matrix(m);
      for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) CHECK(std::abs(sp.at(i, j) + sp.at(j, i) - 1.0) < 1e-9);
    }
  }

  TEST_CASE("smoothed dice") {
    const SpMatrix sp = sp_matrix(dice());
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        if (a != b) CHECK(std::abs(sp.at(a, b) - dice_oracle(a, b)) < 1e-6);
    CHECK(dice_oracle(0, 1) == doctest::Approx(5.0 / 9.0));
    const auto cycles = find_sp_cycles(dice());
    REQUIRE(cycles.size() == 1);
    CHECK(cycles[0].a == 0);
    CHECK(cycles[0].b == 1);
    CHECK(cycles[0].c == 2);
  }

  TEST_CASE("V sets") {
    const ModelSpec m = atom_uniforms();
    CHECK(v_set(m, 0) == SubsetMask::of({1, 2}));
    CHECK(v_set(m, 1) == SubsetMask::of({2}));
    CHECK(v_set(exponentials({1.0, 2.0, 3.0}), 2) == SubsetMask::of({0, 1}));
  }

  TEST_CASE("three independent variables") {
    // X_1 <=st X_2 and any independent Z: P(X_1 <= min(X_2, Z)) >= P(X_2 <= min(X_1, Z)).
    Gen g(43);
    for (int rep = 0; rep < 20; ++rep) {
      const ModelSpec pair = st_ordered_independent(g, 2);
      IndependentModel m = *pair.as<IndependentModel>();
      m.laws.push_back(g.law(false));
      const auto a = alpha_vector(ModelSpec(m), SubsetMask::full(3));
      CHECK(a.of(0) >= a.of(1) - 1e-9);
    }
  }
}

TEST_SUITE("classification") {
  TEST_CASE("point mass and two uniforms") {
    const auto c = classify(atom_uniforms());
    CHECK(c.exhaustive);
    CHECK_FALSE(c.variables[0].weakly_small);
    CHECK(c.variables[1].small);
    CHECK(c.variables[2].small);
    CHECK(c.variables[0].pair_determined == false);
    CHECK(c.variables[1].pair_determined == true);
    CHECK(c.ordered_by_pairs == false);
    REQUIRE(c.ordered_by_pairs_witness.has_value());
    CHECK(c.ordered_by_pairs_witness->subset == SubsetMask::full(3));
  }

  TEST_CASE("cyclic triples are pair-determined") {
    const auto c = classify(dice());
    for (const auto& v : c.variables) {
      CHECK(v.v_set.size() == 1);
      CHECK(v.pair_determined == true);
    }
  }

  TEST_CASE("st-ordered variables are ordered by pairs") {
    const auto c = classify(exponentials({3.0, 2.0, 1.0}));
    CHECK(c.ordered_by_pairs == true);
    for (const auto& v : c.variables) CHECK(v.pair_determined == true);
  }

  TEST_CASE("two variables: weakly small iff stochastic precedence") {
    Gen g(47);
    for (int rep = 0; rep < 16; ++rep) {
      const ModelSpec m = g.of_kind(static_cast<ModelKind>(rep % 4), 2);
      const auto c = classify(m);
      const double p = sp_pair(m, 0, 1).value;
      if (std::abs(p - 0.5) < 1e-6) continue;
      CHECK(c.variables[0].weakly_small == (p > 0.5));
    }
  }

  TEST_CASE("large models are flagged as partial") {
    const auto c = classify(proportional_thls(std::vector<double>(13, 1.0)), {}, 12);
    CHECK_FALSE(c.exhaustive);
    CHECK_FALSE(c.ordered_by_pairs.has_value());
    CHECK_FALSE(c.variables[0].pair_determined.has_value());
  }
}

TEST_SUITE("paradoxes") {
  TEST_CASE("point-mass model reversals") {
    const auto r = find_aggregation_paradoxes(atom_uniforms());
    CHECK(r.exhaustive);
    CHECK(r.cycles.empty());
    bool found = false;
    for (const auto& x : r.reversals) found = found || (x.i == 0 && x.j == 1 && x.subset == SubsetMask::of({0, 1}) && x.l == 2);
    CHECK(found);
    REQUIRE(!r.sp_vs_subset.empty());
    CHECK(r.sp_vs_subset[0].i == 0);
    CHECK(r.sp_vs_subset[0].j == 1);
    CHECK(r.sp_vs_subset[0].subset == SubsetMask::full(3));
  }

  TEST_CASE("ordered and symmetric models are clean") {
    for (const ModelSpec& m : {exponentials({3.0, 2.0, 1.0}), exchangeable_thls(4), proportional_thls({3.0, 2.0, 1.0})}) {
      const auto r = find_aggregation_paradoxes(m);
      CHECK(r.cycles.empty());
      CHECK(r.reversals.empty());
      CHECK(r.sp_vs_subset.empty());
      CHECK(find_sp_cycles(m).empty());
    }
  }

  TEST_CASE("ordered by pairs excludes every pathology") {
    Gen g(53);
    int ordered = 0;
    for (int rep = 0; rep < 40; ++rep) {
      const ModelSpec m = rep % 2 ? st_ordered_independent(g, 4) : g.of_kind(static_cast<ModelKind>(rep % 3), 4);
      const auto c = classify(m);
      if (c.ordered_by_pairs != true) continue;
      ++ordered;
      for (const auto& v : c.variables) CHECK(v.pair_determined == true);
      CHECK(find_sp_cycles(m).empty());
      const auto r = find_aggregation_paradoxes(m);
      CHECK(r.reversals.empty());
      CHECK(r.sp_vs_subset.empty());
    }
    CHECK(ordered >= 20);
  }

  TEST_CASE("reported hits survive a tighter recomputation") {
    Gen g(59);
    for (int rep = 0; rep < 12; ++rep) {
      const ModelSpec m = g.thls(4);
      const auto tight = KernelConfig{}.tightened(10.0);
      for (const auto& x : find_aggregation_paradoxes(m).reversals) {
        const auto small = alpha_vector(m, x.subset, tight);
        const auto big = alpha_vector(m, x.subset.with(x.l), tight);
        CHECK(small.of(x.i) > small.of(x.j));
        CHECK(big.of(x.i) < big.of(x.j));
      }
    }
  }

  TEST_CASE("size cap") {
    const auto r = find_aggregation_paradoxes(atom_uniforms(), 2);
    CHECK(r.max_subset_size == 2);
    CHECK(r.sp_vs_subset.empty());
  }

  TEST_CASE("alpha tables match the serial reference") {
    const ModelSpec m = thls3();
    const auto masks = subsets_by_size(3, 2, 3);
    CHECK(masks.size() == 4);
    const auto par = AlphaTable::build(m, masks);
    const auto ser = serial::build_alpha_table(m, masks);
    for (SubsetMask a : masks) CHECK(par.at(a).values == ser.at(a).values);
  }
}

TEST_SUITE("sufficient conditions") {
  TEST_CASE("st chain") {
    const auto v = sufficient_conditions(exponentials({3.0, 2.0, 1.0}));
    const auto& chain = verdict(v, "independent-st-chain");
    CHECK(chain.hypothesis_holds);
    CHECK(chain.conclusion_verified == true);
    CHECK_FALSE(chain.defect);
    CHECK(verdict(v, "independent-st-minimum").conclusion_verified == true);
  }

  TEST_CASE("load sharing") {
    Gen g(61);
    for (int rep = 0; rep < 10; ++rep) {
      const ModelSpec m = monotone_thls(g, 4);
      const auto& mono = verdict(sufficient_conditions(m), "monotone-load-sharing");
      CHECK(mono.hypothesis_holds);
      CHECK(mono.conclusion_verified == true);
    }
    ThlsModel t = *thls3().as<ThlsModel>();
    t.set_rate({}, 0, 5.0);
    const auto v = sufficient_conditions(ModelSpec(t));
    const auto& init = verdict(v, "initially-time-homogeneous");
    CHECK(init.hypothesis_holds);
    CHECK(init.conclusion_verified == true);
    CHECK(classify(ModelSpec(t)).variables[0].weakly_small);
  }

  TEST_CASE("no defects on random models") {
    Gen g(67);
    for (int rep = 0; rep < 16; ++rep) {
      const ModelSpec m = g.of_kind(static_cast<ModelKind>(rep % 4), 3);
      for (const auto& v : sufficient_conditions(m)) {
        CAPTURE(v.name);
        CAPTURE(v.detail);
        CHECK_FALSE(v.defect);
      }
    }
  }
}
