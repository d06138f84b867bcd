#include "gaggam/genome.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace gaggam {

namespace {

TermKind sample_kind(Rng& rng) {
  const double u = rng.uniform();
  if (u < kKindProbNone) return TermKind::kNone;
  if (u < kKindProbNone + kKindProbLinear) return TermKind::kLinear;
  return TermKind::kSpline;
}

void resample_kind(Gene& gene, Rng& rng) {
  gene.kind = sample_kind(rng);
  if (gene.kind == TermKind::kSpline) {
    gene.n_splines = rng.uniform_int(kMinKnots, kMaxKnots);
    gene.lambda = rng.uniform(kMinLambda, kMaxLambda);
  } else {
    gene.n_splines.reset();
    gene.lambda.reset();
  }
}

char kind_char(TermKind kind) {
  switch (kind) {
    case TermKind::kNone:
      return 'n';
    case TermKind::kLinear:
      return 'l';
    case TermKind::kSpline:
      return 's';
  }
  return '?';
}

}  // namespace

std::string Chromosome::canonical_key() const {
  std::string key;
  key.reserve(genes.size() * 16);
  char buf[32];
  for (const Gene& gene : genes) {
    if (!key.empty()) key.push_back(';');
    key.push_back(kind_char(gene.kind));
    if (gene.kind == TermKind::kSpline) {
      std::snprintf(buf, sizeof(buf), ":%d:%.6f", *gene.n_splines, *gene.lambda);
      key += buf;
    }
    key.push_back(':');
    key.push_back(gene.scale ? '1' : '0');
  }
  return key;
}

Chromosome smart_init(int n_features, Rng& rng) {
  if (n_features < 1) throw std::invalid_argument("n_features must be >= 1");
  Chromosome c;
  c.genes.resize(static_cast<std::size_t>(n_features));
  for (Gene& gene : c.genes) {
    resample_kind(gene, rng);
    gene.scale = rng.coin();
  }
  return c;
}

std::pair<Chromosome, Chromosome> crossover_with_mask(
    const Chromosome& a, const Chromosome& b, const std::vector<bool>& swap_mask) {
  if (a.genes.size() != b.genes.size() || swap_mask.size() != a.genes.size()) {
    throw std::invalid_argument("crossover length mismatch");
  }
  Chromosome child_a = a;
  Chromosome child_b = b;
  for (std::size_t i = 0; i < swap_mask.size(); ++i) {
    if (swap_mask[i]) std::swap(child_a.genes[i], child_b.genes[i]);
  }
  return {std::move(child_a), std::move(child_b)};
}

std::pair<Chromosome, Chromosome> uniform_crossover(const Chromosome& a,
                                                    const Chromosome& b,
                                                    double crossover_prob,
                                                    Rng& rng) {
  if (a.genes.size() != b.genes.size()) {
    throw std::invalid_argument("crossover length mismatch");
  }
  if (!rng.coin(crossover_prob)) return {a, b};
  std::vector<bool> mask(a.genes.size());
  for (std::size_t i = 0; i < mask.size(); ++i) {
    mask[i] = rng.coin(kCrossoverGeneSwapProb);
  }
  return crossover_with_mask(a, b, mask);
}

Gene mutate_gene(const Gene& gene, MutationAction action, Rng& rng) {
  Gene out = gene;
  const bool is_spline = gene.kind == TermKind::kSpline;

  // Parameter perturbations only make sense on spline genes; elsewhere
  // they degrade to a kind resample.
  if (!is_spline && (action == MutationAction::kPerturbKnots ||
                     action == MutationAction::kPerturbLambda)) {
    action = MutationAction::kResampleKind;
  }

  switch (action) {
    case MutationAction::kResampleKind:
      resample_kind(out, rng);
      break;
    case MutationAction::kPerturbKnots: {
      int delta = rng.uniform_int(-3, 2);
      if (delta >= 0) ++delta;  // uniform over {-3,-2,-1,1,2,3}
      out.n_splines = std::clamp(*out.n_splines + delta, kMinKnots, kMaxKnots);
      break;
    }
    case MutationAction::kPerturbLambda:
      out.lambda = std::clamp(*out.lambda * std::exp(rng.normal(0.0, 0.5)),
                              kMinLambda, kMaxLambda);
      break;
    case MutationAction::kFlipScale:
      out.scale = !out.scale;
      break;
  }
  return out;
}

Chromosome mutate(const Chromosome& c, double rate, Rng& rng) {
  if (rate < 0.0 || rate > 1.0) throw std::invalid_argument("rate must be in [0, 1]");
  Chromosome out = c;
  for (Gene& gene : out.genes) {
    if (!rng.coin(rate)) continue;
    const auto action = static_cast<MutationAction>(rng.uniform_int(0, 3));
    gene = mutate_gene(gene, action, rng);
  }
  return out;
}

double adaptive_rate(int generation) {
  if (generation < 0) throw std::invalid_argument("generation must be >= 0");
  const double rate =
      kInitialMutationRate *
      (1.0 - static_cast<double>(generation) / kMutationScheduleSpan);
  return std::max(rate, kMutationRateFloor);
}

ModelSpec to_model_spec(const Chromosome& c) {
  ModelSpec spec;
  spec.terms = c.genes;
  return spec;
}

Chromosome from_model_spec(const ModelSpec& spec) {
  Chromosome c;
  c.genes = spec.terms;
  return c;
}

}  // namespace gaggam
