#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "gaggam/genome.hpp"

using namespace gaggam;

namespace {

void check_gene_invariants(const Gene& gene) {
  if (gene.kind == TermKind::kSpline) {
    REQUIRE(gene.n_splines.has_value());
    REQUIRE(gene.lambda.has_value());
    CHECK(*gene.n_splines >= kMinKnots);
    CHECK(*gene.n_splines <= kMaxKnots);
    CHECK(*gene.lambda >= kMinLambda);
    CHECK(*gene.lambda <= kMaxLambda);
  } else {
    CHECK_FALSE(gene.n_splines.has_value());
    CHECK_FALSE(gene.lambda.has_value());
  }
}

}  // namespace

TEST_CASE("smart_init is reproducible from the rng state") {
  Rng a(42), b(42), c(43);
  const Chromosome ca = smart_init(8, a);
  const Chromosome cb = smart_init(8, b);
  const Chromosome cc = smart_init(8, c);
  CHECK(ca == cb);
  CHECK(ca.canonical_key() == cb.canonical_key());
  CHECK(ca.canonical_key() != cc.canonical_key());
}

TEST_CASE("smart_init kind frequencies match {0.2, 0.3, 0.5}") {
  Rng rng(314159);
  int counts[3] = {0, 0, 0};
  int scaled = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const Chromosome c = smart_init(1, rng);
    counts[static_cast<int>(c.genes[0].kind)] += 1;
    scaled += c.genes[0].scale ? 1 : 0;
    check_gene_invariants(c.genes[0]);
  }
  CHECK(std::abs(counts[0] / double(n) - 0.2) < 0.01);
  CHECK(std::abs(counts[1] / double(n) - 0.3) < 0.01);
  CHECK(std::abs(counts[2] / double(n) - 0.5) < 0.01);
  CHECK(std::abs(scaled / double(n) - 0.5) < 0.01);
}

TEST_CASE("spline genes stay inside the initialization ranges") {
  Rng rng(777);
  for (int i = 0; i < 5000; ++i) {
    const Chromosome c = smart_init(4, rng);
    for (const Gene& gene : c.genes) check_gene_invariants(gene);
  }
}

TEST_CASE("crossover of identical parents returns clones") {
  Rng rng(5);
  const Chromosome a = smart_init(6, rng);
  for (int i = 0; i < 50; ++i) {
    const auto [c1, c2] = uniform_crossover(a, a, 0.3, rng);
    CHECK(c1 == a);
    CHECK(c2 == a);
  }
}

TEST_CASE("full swap mask exchanges the parents exactly") {
  Rng rng(6);
  const Chromosome a = smart_init(5, rng);
  const Chromosome b = smart_init(5, rng);
  const auto [c1, c2] = crossover_with_mask(a, b, std::vector<bool>(5, true));
  CHECK(c1 == b);
  CHECK(c2 == a);
  const auto [d1, d2] = crossover_with_mask(a, b, std::vector<bool>(5, false));
  CHECK(d1 == a);
  CHECK(d2 == b);
}

TEST_CASE("children only ever hold parental genes, position by position") {
  Rng rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    const Chromosome a = smart_init(4, rng);
    const Chromosome b = smart_init(4, rng);
    const auto [c1, c2] = uniform_crossover(a, b, 0.3, rng);
    for (std::size_t i = 0; i < 4; ++i) {
      // The pair of child genes at each slot is exactly the parental pair.
      const bool straight = c1.genes[i] == a.genes[i] && c2.genes[i] == b.genes[i];
      const bool swapped = c1.genes[i] == b.genes[i] && c2.genes[i] == a.genes[i];
      CHECK((straight || swapped));
    }
  }
}

TEST_CASE("crossover length mismatch is rejected") {
  Rng rng(8);
  const Chromosome a = smart_init(3, rng);
  const Chromosome b = smart_init(4, rng);
  CHECK_THROWS_AS(uniform_crossover(a, b, 0.3, rng), std::invalid_argument);
}

TEST_CASE("mutation rate 0 is the identity") {
  Rng rng(9);
  const Chromosome a = smart_init(8, rng);
  const Chromosome m = mutate(a, 0.0, rng);
  CHECK(m == a);
}

TEST_CASE("forced scale-flip action flips every flag") {
  Rng rng(10);
  const Chromosome a = smart_init(8, rng);
  Chromosome flipped = a;
  for (Gene& gene : flipped.genes) {
    gene = mutate_gene(gene, MutationAction::kFlipScale, rng);
  }
  for (std::size_t i = 0; i < a.genes.size(); ++i) {
    CHECK(flipped.genes[i].scale == !a.genes[i].scale);
    CHECK(flipped.genes[i].kind == a.genes[i].kind);
    CHECK(flipped.genes[i].n_splines == a.genes[i].n_splines);
    CHECK(flipped.genes[i].lambda == a.genes[i].lambda);
  }
}

TEST_CASE("knot perturbation moves by a nonzero step and clamps") {
  Rng rng(11);
  Gene gene;
  gene.kind = TermKind::kSpline;
  gene.n_splines = 14;
  gene.lambda = 1.0;
  for (int i = 0; i < 2000; ++i) {
    const Gene out = mutate_gene(gene, MutationAction::kPerturbKnots, rng);
    check_gene_invariants(out);
    const int delta = *out.n_splines - *gene.n_splines;
    CHECK(delta != 0);
    CHECK(std::abs(delta) <= 3);
  }
  // At the boundary the clamp may absorb the step entirely.
  gene.n_splines = kMaxKnots;
  bool saw_clamp = false;
  for (int i = 0; i < 200; ++i) {
    const Gene out = mutate_gene(gene, MutationAction::kPerturbKnots, rng);
    check_gene_invariants(out);
    if (*out.n_splines == kMaxKnots) saw_clamp = true;
  }
  CHECK(saw_clamp);
}

TEST_CASE("mutation fuzz preserves gene invariants") {
  Rng rng(12);
  Chromosome c = smart_init(6, rng);
  for (int i = 0; i < 10000; ++i) {
    c = mutate(c, 0.35, rng);
    for (const Gene& gene : c.genes) check_gene_invariants(gene);
  }
}

TEST_CASE("adaptive rate schedule") {
  CHECK(adaptive_rate(0) == doctest::Approx(0.15));
  CHECK(adaptive_rate(50) == doctest::Approx(0.075));
  CHECK(adaptive_rate(100) == doctest::Approx(0.015));
  CHECK(adaptive_rate(90) == doctest::Approx(0.015));  // floor binds at 1 - g/100 < 0.1
  CHECK(adaptive_rate(250) == doctest::Approx(0.015));
  CHECK_THROWS_AS(adaptive_rate(-1), std::invalid_argument);
}

TEST_CASE("model spec mapping is lossless") {
  Rng rng(13);
  SUBCASE("all-none chromosome maps to an intercept-only spec") {
    Chromosome c;
    c.genes.resize(5);
    const ModelSpec spec = to_model_spec(c);
    for (const TermSpec& term : spec.terms) CHECK(term.kind == TermKind::kNone);
  }
  SUBCASE("spline gene carries knots and lambda across") {
    Chromosome c = smart_init(8, rng);
    const ModelSpec spec = to_model_spec(c);
    for (std::size_t i = 0; i < c.genes.size(); ++i) {
      CHECK(spec.terms[i] == c.genes[i]);
    }
  }
  SUBCASE("round trip is the identity") {
    for (int trial = 0; trial < 100; ++trial) {
      const Chromosome c = smart_init(7, rng);
      CHECK(from_model_spec(to_model_spec(c)) == c);
    }
  }
}

TEST_CASE("canonical keys separate structurally distinct chromosomes") {
  Rng rng(14);
  std::set<std::string> keys;
  std::vector<Chromosome> seen;
  for (int i = 0; i < 500; ++i) {
    const Chromosome c = smart_init(4, rng);
    const bool duplicate =
        std::find(seen.begin(), seen.end(), c) != seen.end();
    const bool key_known = keys.count(c.canonical_key()) > 0;
    CHECK(duplicate == key_known);
    keys.insert(c.canonical_key());
    seen.push_back(c);
  }
}
