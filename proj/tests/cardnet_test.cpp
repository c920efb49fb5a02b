#include <gtest/gtest.h>

#include <bit>
#include <random>

#include "zinc_bridge/cardnet.hpp"

using namespace zb;
using namespace zb::cardnet;

namespace {

std::vector<Lit> inputs(std::size_t n) {
  std::vector<Lit> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(pos(static_cast<std::uint32_t>(i)));
  return v;
}

// Brute force over every aux assignment: set of consistent extensions.
std::size_t count_extensions(const std::vector<Clause>& clauses, std::uint32_t n_inputs, std::uint32_t n_vars,
                             std::uint32_t input_bits) {
  std::size_t count = 0;
  const std::uint32_t aux = n_vars - n_inputs;
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << aux); ++a) {
    std::vector<bool> asg(n_vars);
    for (std::uint32_t i = 0; i < n_inputs; ++i) asg[i] = (input_bits >> i) & 1;
    for (std::uint32_t j = 0; j < aux; ++j) asg[n_inputs + j] = (a >> j) & 1;
    if (clauses_hold(clauses, asg)) ++count;
  }
  return count;
}

}  // namespace

TEST(Cardnet, TwoInputComparator) {
  VarPool pool(2);
  auto net = build_sorting_network(inputs(2), pool);
  ASSERT_EQ(net.outputs.size(), 2u);
  EXPECT_EQ(net.aux_variable_count, 2u);
  EXPECT_EQ(net.clauses.size(), 6u);
  for (std::uint32_t bits = 0; bits < 4; ++bits) {
    std::vector<std::optional<bool>> asg(pool.next());
    asg[0] = bits & 1;
    asg[1] = (bits >> 1) & 1;
    ASSERT_TRUE(propagate_extension(net.clauses, asg));
    EXPECT_EQ(*asg[net.outputs[0].var], bits != 0);
    EXPECT_EQ(*asg[net.outputs[1].var], bits == 3);
  }
}

TEST(Cardnet, ZeroBoundIsDisjunction) {
  VarPool pool(3);
  auto net = build_cardinality_network(inputs(3), 0, pool);
  ASSERT_EQ(net.outputs.size(), 1u);
  for (std::uint32_t bits = 0; bits < 8; ++bits) {
    std::vector<std::optional<bool>> asg(pool.next());
    for (std::uint32_t i = 0; i < 3; ++i) asg[i] = (bits >> i) & 1;
    ASSERT_TRUE(propagate_extension(net.clauses, asg));
    EXPECT_EQ(*asg[net.outputs[0].var], bits != 0);
  }
}

TEST(Cardnet, RejectsBadBounds) {
  VarPool pool(3);
  EXPECT_THROW(build_cardinality_network(inputs(3), 4, pool), std::invalid_argument);
  EXPECT_THROW(build_cardinality_network({}, 0, pool), std::invalid_argument);
  EXPECT_THROW(encode_atmost_k(inputs(2), 3, pool), std::invalid_argument);
}

TEST(Cardnet, UniqueExtensionBruteForce) {
  for (std::size_t n = 1; n <= 4; ++n) {
    for (std::size_t k = 0; k <= n; ++k) {
      VarPool pool(static_cast<std::uint32_t>(n));
      auto net = build_cardinality_network(inputs(n), k, pool);
      for (std::uint32_t bits = 0; bits < (1u << n); ++bits) {
        EXPECT_EQ(count_extensions(net.clauses, static_cast<std::uint32_t>(n), pool.next(), bits), 1u)
            << "n=" << n << " k=" << k << " bits=" << bits;
      }
    }
  }
}

TEST(Cardnet, FiveInputsKTwoCountsCorrectly) {
  VarPool pool(5);
  auto net = build_cardinality_network(inputs(5), 2, pool);
  ASSERT_EQ(net.outputs.size(), 3u);
  for (std::uint32_t bits = 0; bits < 32; ++bits) {
    std::vector<std::optional<bool>> asg(pool.next());
    for (std::uint32_t i = 0; i < 5; ++i) asg[i] = (bits >> i) & 1;
    ASSERT_TRUE(propagate_extension(net.clauses, asg));
    const int cnt = std::popcount(bits);
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(*asg[net.outputs[j].var], cnt >= static_cast<int>(j + 1));
  }
}

TEST(Cardnet, AtMostAtLeastExactlyProjection) {
  // Satisfiable projections onto inputs, checked against every aux extension.
  for (std::size_t n = 1; n <= 4; ++n) {
    for (std::size_t k = 0; k <= n; ++k) {
      for (int kind = 0; kind < 3; ++kind) {
        VarPool pool(static_cast<std::uint32_t>(n));
        Encoding e = kind == 0 ? encode_atmost_k(inputs(n), k, pool)
                   : kind == 1 ? encode_atleast_k(inputs(n), k, pool)
                               : encode_exactly_k(inputs(n), k, pool);
        for (std::uint32_t bits = 0; bits < (1u << n); ++bits) {
          const std::size_t cnt = static_cast<std::size_t>(std::popcount(bits));
          const bool expect = kind == 0 ? cnt <= k : kind == 1 ? cnt >= k : cnt == k;
          const bool sat = count_extensions(e.clauses, static_cast<std::uint32_t>(n), pool.next(), bits) > 0;
          EXPECT_EQ(sat, expect) << "kind=" << kind << " n=" << n << " k=" << k << " bits=" << bits;
        }
      }
    }
  }
}

TEST(Cardnet, ZeroAndFullBoundsAreUnits) {
  VarPool pool(3);
  auto e = encode_atmost_k(inputs(3), 0, pool);
  EXPECT_EQ(e.clauses, (std::vector<Clause>{{neg(0)}, {neg(1)}, {neg(2)}}));
  auto f = encode_atleast_k(inputs(3), 3, pool);
  EXPECT_EQ(f.clauses, (std::vector<Clause>{{pos(0)}, {pos(1)}, {pos(2)}}));
  EXPECT_EQ(pool.next(), 3u);
}

TEST(Cardnet, Deterministic) {
  VarPool p1(10), p2(10);
  auto a = build_cardinality_network(inputs(10), 4, p1);
  auto b = build_cardinality_network(inputs(10), 4, p2);
  EXPECT_EQ(a.clauses, b.clauses);
  EXPECT_EQ(a.outputs, b.outputs);
}

TEST(Cardnet, GrowthIsNotExplosive) {
  // Clauses per input should grow roughly like log^2(k+1), never like n*k.
  std::size_t prev_per_input = 0;
  for (std::size_t n : {16u, 64u, 256u, 1024u}) {
    const std::size_t k = n / 4;
    VarPool pool(static_cast<std::uint32_t>(n));
    auto net = build_cardinality_network(inputs(n), k, pool);
    const double log2k = std::log2(static_cast<double>(k + 1));
    EXPECT_LE(static_cast<double>(net.clauses.size()), 12.0 * static_cast<double>(n) * log2k * log2k);
    const std::size_t per_input = net.clauses.size() / n;
    EXPECT_GE(per_input, prev_per_input);
    prev_per_input = per_input;
  }
  // For a fixed k the size is linear in n.
  std::size_t prev = 0;
  for (std::size_t n : {64u, 128u, 256u, 512u}) {
    VarPool pool(static_cast<std::uint32_t>(n));
    const std::size_t size = build_cardinality_network(inputs(n), 7, pool).clauses.size();
    if (prev) EXPECT_LE(size, prev * 2 + prev / 8);
    prev = size;
  }
}

namespace {

bool pb_sat(const PbEncoding& e, std::uint32_t n, std::uint32_t n_vars, std::uint32_t bits) {
  std::vector<std::optional<bool>> asg(n_vars);
  for (std::uint32_t i = 0; i < n; ++i) asg[i] = (bits >> i) & 1;
  if (!propagate_extension(e.clauses, asg)) return false;
  if (!e.link) return true;
  Integer sum = 0;
  for (const auto& t : e.link->terms)
    if (*asg[t.lit.var] != t.lit.negated) sum += t.weight;
  switch (e.link->rel) {
    case Relation::Le: return sum <= e.link->bound;
    case Relation::Ge: return sum >= e.link->bound;
    case Relation::Eq: return sum == e.link->bound;
  }
  return false;
}

}  // namespace

TEST(CardnetPb, ExampleWeights) {
  std::vector<WeightedLit> terms;
  const int ws[] = {2, 2, 3, 3, 3};
  for (std::uint32_t i = 0; i < 5; ++i) terms.push_back({pos(i), ws[i]});
  VarPool pool(5);
  auto e = encode_pb_sum(terms, Relation::Le, 7, pool);
  for (std::uint32_t bits = 0; bits < 32; ++bits) {
    int sum = 0;
    for (int i = 0; i < 5; ++i) sum += ((bits >> i) & 1) ? ws[i] : 0;
    EXPECT_EQ(pb_sat(e, 5, pool.next(), bits), sum <= 7) << bits;
  }
}

TEST(CardnetPb, SingleLiteralForcedFalse) {
  VarPool pool(1);
  auto e = encode_pb_sum({{pos(0), 5}}, Relation::Le, 4, pool);
  EXPECT_EQ(e.clauses, (std::vector<Clause>{{neg(0)}}));
  EXPECT_FALSE(e.link.has_value());
}

TEST(CardnetPb, UnitWeightsMatchAtMost) {
  VarPool p1(4), p2(4);
  std::vector<WeightedLit> terms;
  for (std::uint32_t i = 0; i < 4; ++i) terms.push_back({pos(i), 1});
  auto e = encode_pb_sum(terms, Relation::Le, 2, p1);
  auto a = encode_atmost_k(inputs(4), 2, p2);
  EXPECT_EQ(e.clauses, a.clauses);
}

TEST(CardnetPb, RandomAgainstArithmetic) {
  std::mt19937 rng(11);
  for (int iter = 0; iter < 200; ++iter) {
    const std::uint32_t n = 1 + rng() % 6;
    std::vector<WeightedLit> terms;
    std::vector<std::pair<int, int>> raw;  // (var, signed weight), with literal polarity
    const std::size_t count = 1 + rng() % 7;
    for (std::size_t i = 0; i < count; ++i) {
      const std::uint32_t v = rng() % n;
      const bool negated = rng() % 3 == 0;
      int w = static_cast<int>(rng() % 21) - 10;
      if (w == 0) w = 1;
      terms.push_back({Lit{v, negated}, w});
      raw.emplace_back(static_cast<int>(v) * (negated ? -1 : 1) - (negated ? 1 : 0), w);
    }
    const Relation rel = static_cast<Relation>(rng() % 3);
    const int bound = static_cast<int>(rng() % 31) - 15;
    VarPool pool(n);
    auto e = encode_pb_sum(terms, rel, bound, pool);
    for (std::uint32_t bits = 0; bits < (1u << n); ++bits) {
      int sum = 0;
      for (const auto& t : terms) {
        const bool val = ((bits >> t.lit.var) & 1) != t.lit.negated;
        sum += val ? static_cast<int>(t.weight.get_si()) : 0;
      }
      const bool expect = rel == Relation::Le ? sum <= bound : rel == Relation::Ge ? sum >= bound : sum == bound;
      ASSERT_EQ(pb_sat(e, n, pool.next(), bits), expect) << "iter " << iter << " bits " << bits;
    }
  }
}
