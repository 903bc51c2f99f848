#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "netquality/oracles.hpp"
#include "netquality/recommend.hpp"

using namespace nq;

namespace {

enum : UserIndex { A, B, C, D, E };

BeautyProfiles profiles_of(std::initializer_list<std::optional<double>> v) {
  return BeautyProfiles(std::vector<std::optional<double>>(v));
}

}  // namespace

TEST_CASE("candidates examples") {
  const auto g = nqtest::snapshot(5, {{A, B}, {A, C}, {B, D}, {C, D}, {B, E}});
  CHECK(candidates(g, A) == std::vector<Candidate>{{D, 2}, {E, 1}});
  CHECK(oracle_candidates(g, A) == std::vector<Candidate>{{D, 2}, {E, 1}});
  CHECK(candidates(g, D).empty());
  CHECK(candidates(nqtest::snapshot(2, {{0, 1}, {1, 0}}), 0).empty());

  // 3x3 bipartite plus tails: 0 reaches 6 through 4 and 5, and 7 through 3.
  const auto bip = nqtest::snapshot(8, {{0, 3}, {0, 4}, {0, 5}, {1, 3}, {1, 4}, {1, 5}, {2, 3}, {2, 4}, {2, 5},
                                        {5, 6}, {4, 6}, {3, 7}});
  CHECK(candidates(bip, 0) == std::vector<Candidate>{{6, 2}, {7, 1}});
  CHECK(oracle_candidates(bip, 0) == std::vector<Candidate>{{6, 2}, {7, 1}});
  CHECK(oracle_candidates(nqtest::snapshot(3, {{1, 2}}), 0).empty());
}

TEST_CASE("candidates match the oracle on random graphs") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 60;
    std::vector<std::pair<UserIndex, UserIndex>> edges;
    std::uniform_int_distribution<UserIndex> node(0, n - 1);
    for (int i = 0; i < 300; ++i) {
      const auto a = node(rng), b = node(rng);
      if (a != b) edges.emplace_back(a, b);
    }
    const auto g = GraphSnapshot::from_edges(n, edges);
    for (UserIndex u = 0; u < n; ++u) {
      const auto c = candidates(g, u);
      CHECK(c == oracle_candidates(g, u));
      for (const auto& x : c) {
        CHECK(x.user != u);
        CHECK_FALSE(g.has_edge(u, x.user));
      }
    }
  }
}

TEST_CASE("recommend_cn") {
  const auto g = nqtest::snapshot(5, {{A, B}, {A, C}, {B, D}, {C, D}, {B, E}});
  const auto r = recommend_cn(g, A);
  REQUIRE(r.has_value());
  CHECK(r->candidate == D);
  CHECK(r->score == 2.0);
  CHECK(r->rule == RecRule::CN);

  const auto tie = nqtest::snapshot(5, {{A, B}, {A, C}, {B, E}, {C, D}});
  CHECK(recommend_cn(tie, A)->candidate == D);
  CHECK_FALSE(recommend_cn(g, E).has_value());
}

TEST_CASE("recommend_bb") {
  const auto g = nqtest::snapshot(5, {{A, B}, {A, C}, {B, D}, {C, E}});
  const auto r = recommend_bb(g, profiles_of({0.40, 0.3, 0.3, 0.43, 0.50}), A);
  REQUIRE(r.has_value());
  CHECK(r->candidate == D);
  CHECK(r->score == doctest::Approx(0.43));
  CHECK(r->rule == RecRule::BB);
  CHECK_FALSE(recommend_bb(g, profiles_of({0.40, 0.3, 0.3, 0.2, 0.9}), A).has_value());
  CHECK(recommend_bb(g, profiles_of({0.40, 0.3, 0.3, 0.2, 0.41}), A)->candidate == E);
  CHECK(recommend_bb(g, profiles_of({0.40, 0.3, 0.3, 0.42, 0.42}), A)->candidate == D);
  CHECK_FALSE(recommend_bb(g, profiles_of({0.40, 0.3, 0.3, std::nullopt, std::nullopt}), A).has_value());
  CHECK_THROWS_AS(recommend_bb(g, profiles_of({std::nullopt, 0.3, 0.3, 0.4, 0.4}), A), PreconditionError);
}

TEST_CASE("evaluate") {
  const auto p = profiles_of({0.4, 0.5, 0.2, 0.6});
  const std::vector<double> favs{0, 10, 4, 6};
  const std::vector<bool> forlorn{false, true, false, false};

  const std::vector<Recommendation> one{{0, 1, RecRule::BB, 0.5}};
  const auto e = evaluate(one, p, favs, forlorn);
  CHECK(e.b_recs == doctest::Approx(0.5));
  CHECK(e.b_ratio == doctest::Approx(0.8));
  CHECK(e.fav_recs == doctest::Approx(10));
  CHECK(e.p_forlorn == doctest::Approx(1.0));
  CHECK(e.size == 1);

  const auto same = profiles_of({0.4, 0.4});
  CHECK(evaluate(std::vector<Recommendation>{{0, 1, RecRule::CN, 1}}, same, favs, forlorn).b_ratio == 1.0);

  const std::vector<Recommendation> two{{0, 2, RecRule::CN, 1}, {0, 3, RecRule::CN, 1}};
  const auto t = evaluate(two, p, favs, forlorn);
  CHECK(t.b_recs == doctest::Approx(0.4));
  CHECK(t.fav_recs == doctest::Approx(5));
  CHECK(t.p_forlorn == 0.0);
  CHECK_THROWS_AS(evaluate(std::vector<Recommendation>{}, p, favs, forlorn), PreconditionError);

  const BeautyProfiles partial(std::vector<std::optional<double>>{0.4, std::nullopt, 0.5, 0.0});
  const std::vector<Recommendation> mixed{{0, 1, RecRule::CN, 1}, {0, 2, RecRule::CN, 1}, {0, 3, RecRule::CN, 1}};
  const auto m = evaluate(mixed, partial, favs, forlorn);
  CHECK(m.profiled == 2);
  CHECK(m.b_recs == doctest::Approx(0.25));
  CHECK(m.b_ratio == doctest::Approx(0.8));
  CHECK(m.fav_recs == doctest::Approx(20.0 / 3));
  CHECK(m.p_forlorn == doctest::Approx(1.0 / 3));
  CHECK(std::isnan(evaluate(std::vector<Recommendation>{{0, 1, RecRule::CN, 1}}, partial, favs, forlorn).b_recs));
  CHECK_THROWS_AS(evaluate(std::vector<Recommendation>{{1, 0, RecRule::CN, 1}}, partial, favs, forlorn),
                  PreconditionError);
}

TEST_CASE("recommend_all: band, beauty-blind CN, thread independence") {
  std::mt19937_64 rng(17);
  const std::size_t n = 120;
  std::vector<std::pair<UserIndex, UserIndex>> edges;
  std::uniform_int_distribution<UserIndex> node(0, n - 1);
  for (int i = 0; i < 900; ++i) {
    const auto a = node(rng), b = node(rng);
    if (a != b) edges.emplace_back(a, b);
  }
  const auto g = GraphSnapshot::from_edges(n, edges);
  std::vector<std::optional<double>> v(n), w(n);
  std::uniform_real_distribution<double> u(0.1, 0.9);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = u(rng);
    w[i] = u(rng);
  }
  const BeautyProfiles p(v), q(w);
  std::vector<UserIndex> recipients(n);
  for (UserIndex i = 0; i < n; ++i) recipients[i] = i;

  const auto one = recommend_all(g, p, recipients, 0.10, 1);
  const auto four = recommend_all(g, p, recipients, 0.10, 4);
  REQUIRE(one.bb.size() == four.bb.size());
  REQUIRE(one.cn.size() == four.cn.size());
  CHECK_FALSE(one.bb.empty());
  for (std::size_t i = 0; i < one.bb.size(); ++i) {
    CHECK(one.bb[i].candidate == four.bb[i].candidate);
    const double ratio = p.at(one.bb[i].recipient) / p.at(one.bb[i].candidate);
    CHECK(ratio >= 1.0 / 1.1 - 1e-12);
    CHECK(ratio <= 1.0 / 0.9 + 1e-12);
  }
  const auto relabeled = recommend_all(g, q, recipients, 0.10, 2);
  REQUIRE(relabeled.cn.size() == one.cn.size());
  for (std::size_t i = 0; i < one.cn.size(); ++i) {
    CHECK(one.cn[i].candidate == four.cn[i].candidate);
    CHECK(one.cn[i].candidate == relabeled.cn[i].candidate);
  }
}
