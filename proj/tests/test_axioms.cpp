#include "sxr/axioms.hpp"

#include <doctest.h>

#include <cmath>

using namespace sxr;

namespace {
Bundle b2(double a, double b) {
  Vec v(2);
  v << a, b;
  return Bundle(v);
}
Bundle b3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return Bundle(v);
}
Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}
}  // namespace

TEST_CASE("normalized derivative matrix of the cycling field") {
  Field n3 = Field::nonintegrable3();
  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    Bundle x = b3(rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0));
    AntonelliReport rep = antonelli(n3, x);
    CHECK(rep.matrix(0, 0) == doctest::Approx(0.0));
    CHECK(rep.matrix(0, 1) == doctest::Approx(1.0));
    CHECK(rep.matrix(1, 0) == doctest::Approx(0.0));
    CHECK(rep.matrix(1, 1) == doctest::Approx(0.0));
    CHECK(rep.symmetry_residual == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
    CHECK(rep.classification == Definiteness::indefinite);
  }
}

TEST_CASE("one-by-one matrices for two goods") {
  Field cobb = Field::cobb_douglas(v2(0.5, 0.5));
  AntonelliReport rc = antonelli(cobb, b2(1, 1));
  REQUIRE(rc.matrix.rows() == 1);
  CHECK(rc.matrix(0, 0) == doctest::Approx(-2.0).epsilon(1e-10));
  CHECK(rc.classification == Definiteness::negative_definite);
  CHECK(rc.symmetry_residual == doctest::Approx(0.0));

  Field id = Field::identity(2);
  AntonelliReport ri = antonelli(id, b2(1, 1));
  CHECK(ri.matrix(0, 0) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(ri.classification == Definiteness::positive_definite);
}

TEST_CASE("pivot relabeling keeps the verdict") {
  Field cobb = Field::cobb_douglas(b3(0.5, 1.0, 1.5).vec());
  Bundle x = b3(1.2, 0.8, 1.1);
  AntonelliReport base = antonelli(cobb, x);
  for (int pivot : {0, 1, 2}) {
    AntonelliReport rep = antonelli_pivoted(cobb, x, pivot);
    CHECK(rep.classification == base.classification);
    CHECK(rep.symmetry_residual <= 1e-9);
  }
  CHECK_THROWS_AS(antonelli_pivoted(cobb, x, 3), DomainError);
}

TEST_CASE("vanishing trailing component falls back to the largest pivot") {
  Field tiny = Field::from_expressions(3, {"1 + x2", "1 + x1", "0.0000000001"});
  Bundle x = b3(1, 1, 1);
  CHECK_THROWS_AS(antonelli(tiny, x), DomainError);
  AntonelliReport rep = antonelli_auto(tiny, x);
  CHECK(rep.pivot != 2);
  CHECK(rep.matrix.rows() == 2);
}

TEST_CASE("curl residuals") {
  Field id2 = Field::identity(2);
  CHECK(curl_residuals(id2, b2(1, 2)).empty());

  Field n3 = Field::nonintegrable3();
  auto res = curl_residuals(n3, b3(0.7, 1.9, 1.1));
  REQUIRE(res.size() == 1);
  CHECK(res[0].i == 0);
  CHECK(res[0].j == 1);
  CHECK(res[0].k == 2);
  CHECK(res[0].value == doctest::Approx(1.0).epsilon(1e-12));

  Field cobb = Field::cobb_douglas(b3(0.5, 1.0, 1.5).vec());
  for (const auto& r : curl_residuals(cobb, b3(1.3, 0.6, 1.9)))
    CHECK(std::abs(r.value) <= 1e-6);
}

TEST_CASE("tangent-space quadratic form verdicts") {
  Field id = Field::identity(2);
  TangentFormVerdict vi = tangent_definiteness(id, b2(1, 1));
  REQUIRE(vi.eigenvalues.size() == 1);
  CHECK(vi.max_eigenvalue == doctest::Approx(1.0).epsilon(1e-10));
  CHECK_FALSE(vi.a1_holds);
  CHECK_FALSE(vi.a2_holds);

  Field cobb = Field::cobb_douglas(v2(0.5, 0.5));
  TangentFormVerdict vc = tangent_definiteness(cobb, b2(1, 1));
  CHECK(vc.max_eigenvalue == doctest::Approx(-0.5).epsilon(1e-10));
  CHECK(vc.a1_holds);
  CHECK(vc.a2_holds);
}

TEST_CASE("the stock two-good counterexample is flagged") {
  Field id = Field::identity(2);
  Box region = Box::cube(2, 0.5, 2.0);
  std::vector<std::pair<Vec, Vec>> candidates = {{v2(2, 1), v2(1, 2)}};
  AxiomVerdict v = check_wwa(id, region, 200, 42, candidates);
  CHECK(v.status == AxiomStatus::violated);
  REQUIRE(!v.pair_witnesses.empty());
  const PairWitness& w = v.pair_witnesses.front();
  CHECK(w.cross_at_x == doctest::Approx(4.0));
  CHECK(w.own_at_x == doctest::Approx(5.0));
  CHECK(w.cross_at_y == doctest::Approx(4.0));
  CHECK(w.own_at_y == doctest::Approx(5.0));
  // Witness re-verifies by direct evaluation.
  CHECK(w.cross_at_x <= w.own_at_x);
  CHECK(w.cross_at_y < w.own_at_y);
}

TEST_CASE("consistent fields give no witnesses") {
  Field cobb = Field::cobb_douglas(v2(0.5, 0.5));
  Box region = Box::cube(2, 0.5, 2.0);
  CHECK(check_wwa(cobb, region, 10000, 42).status == AxiomStatus::no_violation_found);
  CHECK(check_weak_axiom(cobb, region, 10000, 42).status == AxiomStatus::no_violation_found);
  // Identical pairs never witness the weak-weak form.
  std::vector<std::pair<Vec, Vec>> same = {{v2(1.3, 0.6), v2(1.3, 0.6)}};
  CHECK(check_wwa(cobb, region, 0, 42, same).status == AxiomStatus::no_violation_found);
}

TEST_CASE("strict form catches ties on flat segments") {
  // Constant field: every pair on a shared budget line ties.
  Field flat = Field::ces(v2(1.0, 1.0), 1.0);
  Box region = Box::cube(2, 0.5, 2.0);
  std::vector<std::pair<Vec, Vec>> tie = {{v2(1.0, 1.0), v2(1.5, 0.5)}};
  AxiomVerdict strict = check_weak_axiom(flat, region, 0, 42, tie);
  CHECK(strict.status == AxiomStatus::violated);
  // The weak-weak form tolerates the tie.
  CHECK(check_wwa(flat, region, 0, 42, tie).status == AxiomStatus::no_violation_found);
  // The identity field fails even the strict form on the stock pair.
  Field id = Field::identity(2);
  std::vector<std::pair<Vec, Vec>> candidates = {{v2(2, 1), v2(1, 2)}};
  CHECK(check_weak_axiom(id, region, 0, 42, candidates).status == AxiomStatus::violated);
}

TEST_CASE("curl sampling verdicts") {
  Box region3 = Box::cube(3, 0.5, 2.0);
  AxiomVerdict bad = check_ville(Field::nonintegrable3(), region3, 64, 42);
  CHECK(bad.status == AxiomStatus::violated);
  CHECK(bad.samples_tested == 64);
  CHECK(bad.point_witnesses.size() == 64);  // violated at every sample
  for (const auto& w : bad.point_witnesses) CHECK(w.residual == doctest::Approx(1.0).epsilon(1e-6));

  AxiomVerdict good = check_ville(Field::cobb_douglas(b3(0.5, 1.0, 1.5).vec()), region3, 64, 42);
  CHECK(good.status == AxiomStatus::no_violation_found);

  // Two goods never cycle: immediate verdict, no sampling.
  AxiomVerdict two = check_ville(Field::identity(2), Box::cube(2, 0.5, 2.0), 100, 42);
  CHECK(two.status == AxiomStatus::no_violation_found);
  CHECK(two.samples_tested == 0);
}

TEST_CASE("definiteness classifications agree across both routes") {
  // Tangent-form verdicts against the normalized-matrix classification,
  // plus the symmetry/curl equivalence, on random points.
  std::vector<Field> fields;
  fields.push_back(Field::cobb_douglas(b3(0.5, 1.0, 1.5).vec()));
  fields.push_back(Field::ces(b3(1.0, 1.0, 2.0).vec(), 0.5));
  fields.push_back(Field::nonintegrable3());
  Rng rng(53);
  for (const auto& f : fields) {
    for (int trial = 0; trial < 100; ++trial) {
      Bundle x = b3(rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0));
      AntonelliReport rep = antonelli(f, x);
      TangentFormVerdict tf = tangent_definiteness(f, x);
      bool nsd = rep.classification == Definiteness::negative_definite ||
                 rep.classification == Definiteness::negative_semidefinite;
      bool nd = rep.classification == Definiteness::negative_definite;
      CHECK(tf.a1_holds == nsd);
      CHECK(tf.a2_holds == nd);

      double curl_max = 0.0;
      for (const auto& r : curl_residuals(f, x)) curl_max = std::max(curl_max, std::abs(r.value));
      CHECK((curl_max <= 1e-8) == (rep.symmetry_residual <= 1e-8));
    }
  }
}

TEST_CASE("verdicts are invariant under positive rescaling") {
  auto scale = [](const Vec& x) { return 1.0 + x[0]; };
  std::vector<std::pair<Field, Field>> pairs;
  pairs.emplace_back(Field::cobb_douglas(b3(0.5, 1.0, 1.5).vec()),
                     Field::cobb_douglas(b3(0.5, 1.0, 1.5).vec()).rescaled(scale, "1+x1"));
  pairs.emplace_back(Field::nonintegrable3(), Field::nonintegrable3().rescaled(scale, "1+x1"));
  pairs.emplace_back(Field::identity(3), Field::identity(3).rescaled(scale, "1+x1"));

  Rng rng(59);
  for (const auto& [base, scaled] : pairs) {
    for (int trial = 0; trial < 50; ++trial) {
      Bundle x = b3(rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0));
      TangentFormVerdict tb = tangent_definiteness(base, x);
      TangentFormVerdict ts = tangent_definiteness(scaled, x);
      CHECK(tb.a1_holds == ts.a1_holds);
      CHECK(tb.a2_holds == ts.a2_holds);

      double curl_base = 0.0, curl_scaled = 0.0;
      Vec gb = base.value(x), gs = scaled.value(x);
      Mat jb = base.jacobian(x).matrix, js = scaled.jacobian(x).matrix;
      double tol_base = 1e-6 * (1.0 + gb.norm() * jb.norm());
      double tol_scaled = 1e-6 * (1.0 + gs.norm() * js.norm());
      for (const auto& r : curl_residuals(base, x)) curl_base = std::max(curl_base, std::abs(r.value));
      for (const auto& r : curl_residuals(scaled, x))
        curl_scaled = std::max(curl_scaled, std::abs(r.value));
      CHECK((curl_base > tol_base) == (curl_scaled > tol_scaled));
    }
  }
}

TEST_CASE("cycle search comes back empty for an integrable field") {
  Field cobb = Field::cobb_douglas(b3(0.5, 1.0, 1.5).vec());
  auto triple = find_intransitive_triple(cobb, Box::cube(3, 0.5, 2.0), 42, 500);
  CHECK_FALSE(triple.has_value());
  CHECK_THROWS_AS(find_intransitive_triple(Field::identity(2), Box::cube(2, 0.5, 2.0), 42, 10),
                  DomainError);
}

TEST_CASE("cycle search finds and certifies a witness on the cycling field") {
  Field n3 = Field::nonintegrable3();
  auto triple = find_intransitive_triple(n3, Box::cube(3, 0.5, 2.0), 42, 500);
  REQUIRE(triple.has_value());
  CHECK(triple->gain > 1.0 + 1e-4);
  CHECK(triple->shrink_factor < 1.0 - 1e-4);
  CHECK(triple->raw_score > 1e-3);

  // Chain legs are exactly indifferent after normalization.
  CHECK(utility(n3, Bundle(triple->x), Bundle(triple->y)) == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(utility(n3, Bundle(triple->y), Bundle(triple->z)) == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(utility(n3, Bundle(triple->z), Bundle(triple->x)) ==
        doctest::Approx(triple->gain).epsilon(1e-7));

  // Independent re-verification through the composed tour.
  double h = holonomy(n3, Bundle(triple->x), Bundle(triple->y), Bundle(triple->z));
  CHECK(std::abs(h - 1.0) > 1e-3);
}

TEST_CASE("closed improving curve from the cycle witness") {
  Field n3 = Field::nonintegrable3();
  auto triple = find_intransitive_triple(n3, Box::cube(3, 0.5, 2.0), 42, 500);
  REQUIRE(triple.has_value());

  VilleCurve curve = construct_ville_curve(n3, *triple, 0.5);
  CHECK(curve.min_directional > 0.0);
  CHECK(curve.closure_gap <= 1e-6 * curve.close_to.norm());
  CHECK(curve.shrink_factor < 1.0);
  REQUIRE(curve.legs.size() == 3);
  for (const auto& leg : curve.legs) CHECK(leg.ray_residual <= 1e-6);

  // Legs chain head to tail.
  CHECK(curve.legs[1].start.isApprox(curve.legs[0].points.back()));
  CHECK(curve.legs[2].start.isApprox(curve.legs[1].points.back()));
  CHECK(curve.close_from.isApprox(curve.legs[2].points.back()));

  // Definition-level validation at over a thousand samples.
  CHECK(min_directional_derivative(n3, curve, 1200) > 0.0);

  CHECK_THROWS_AS(construct_ville_curve(n3, *triple, 0.0), DomainError);
}
