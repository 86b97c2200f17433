#include <doctest.h>

#include <array>
#include <map>
#include <utility>
#include <vector>

#include "punct/features.hpp"
#include "punct/rng.hpp"
#include "punct/tokenizer.hpp"
#include "test_support.hpp"

using namespace punct;
using testsup::leguin_doc;
using testsup::near;

namespace {

constexpr double kTol = 1e-12;

// Index shorthands in storage order.
constexpr int P_ = 0, C_ = 1, S_ = 3, Q_ = 8;

double matrix_sum(const Matrix10& m) {
  double total = 0.0;
  for (const auto& row : m)
    for (double v : row) total += v;
  return total;
}

}  // namespace

TEST_CASE("f1: worked example frequencies") {
  const auto f1 = compute_f1(leguin_doc().seq);
  CHECK(near(f1[P_], 1.0 / 3, kTol));
  CHECK(near(f1[C_], 1.0 / 6, kTol));
  CHECK(near(f1[S_], 1.0 / 6, kTol));
  CHECK(near(f1[Q_], 1.0 / 3, kTol));
  for (int i : {2, 4, 5, 6, 7, 9}) CHECK(f1[static_cast<std::size_t>(i)] == 0.0);
}

TEST_CASE("f1: single mark and brute-force comparison") {
  const auto delta = compute_f1({Mark::Period});
  CHECK(delta[P_] == 1.0);
  for (int i = 1; i < 10; ++i) CHECK(delta[static_cast<std::size_t>(i)] == 0.0);

  rng::Engine eng(11u);
  MarkSequence seq;
  std::array<int, 10> counts{};
  for (int i = 0; i < 1000; ++i) {
    const auto m = static_cast<int>(rng::bounded(eng, 10));
    seq.push_back(static_cast<Mark>(m));
    ++counts[static_cast<std::size_t>(m)];
  }
  const auto f1 = compute_f1(seq);
  for (int i = 0; i < 10; ++i) {
    CHECK(f1[static_cast<std::size_t>(i)] ==
          counts[static_cast<std::size_t>(i)] / 1000.0);
  }

  CHECK_THROWS_AS(compute_f1({}), std::invalid_argument);
}

TEST_CASE("transitions: worked example P and Pt entrywise") {
  const auto tm = compute_transitions(leguin_doc().seq);

  Matrix10 expect_P{};
  expect_P[P_][P_] = 0.5;
  expect_P[P_][S_] = 0.25;
  expect_P[P_][Q_] = 0.25;
  expect_P[C_][P_] = 0.5;
  expect_P[C_][Q_] = 0.5;
  expect_P[S_][S_] = 0.5;
  expect_P[S_][Q_] = 0.5;
  expect_P[Q_][P_] = 1.0 / 3;
  expect_P[Q_][C_] = 1.0 / 3;
  expect_P[Q_][Q_] = 1.0 / 3;

  Matrix10 expect_Pt{};
  expect_Pt[P_][P_] = 1.0 / 6;
  expect_Pt[P_][S_] = 1.0 / 12;
  expect_Pt[P_][Q_] = 1.0 / 12;
  expect_Pt[C_][P_] = 1.0 / 12;
  expect_Pt[C_][Q_] = 1.0 / 12;
  expect_Pt[S_][S_] = 1.0 / 12;
  expect_Pt[S_][Q_] = 1.0 / 12;
  expect_Pt[Q_][P_] = 1.0 / 9;
  expect_Pt[Q_][C_] = 1.0 / 9;
  expect_Pt[Q_][Q_] = 1.0 / 9;

  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      const auto si = static_cast<std::size_t>(i);
      const auto sj = static_cast<std::size_t>(j);
      CHECK(near(tm.P[si][sj], expect_P[si][sj], kTol));
      CHECK(near(tm.Pt[si][sj], expect_Pt[si][sj], kTol));
    }
  }
  for (int i = 0; i < 10; ++i) {
    CHECK(tm.row_defined[static_cast<std::size_t>(i)] ==
          (i == P_ || i == C_ || i == S_ || i == Q_));
  }
  CHECK(near(matrix_sum(tm.Pt), 1.0, kTol));
}

TEST_CASE("transitions: defined rows are stochastic and joint mass is f1-weighted") {
  // A type that only ever appears with a successor keeps a full row: in
  // [Period, Period, Period] both transitions leave a Period that has a
  // successor, so the conditional probability is 1 and the joint mass is
  // f1[Period] = 1.
  const auto uniform = compute_transitions({Mark::Period, Mark::Period, Mark::Period});
  CHECK(uniform.P[P_][P_] == 1.0);
  CHECK(uniform.Pt[P_][P_] == 1.0);

  // A type occurring only at the final position has no outgoing pair;
  // its row is undefined and the joint mass falls short by f1[type].
  const auto tail = compute_transitions({Mark::Comma, Mark::Period});
  CHECK(tail.P[C_][P_] == 1.0);
  CHECK_FALSE(tail.row_defined[P_]);
  CHECK(near(matrix_sum(tail.Pt), 0.5, kTol));

  CHECK_THROWS_AS(compute_transitions({Mark::Period}), std::invalid_argument);
  CHECK_THROWS_AS(compute_transitions({}), std::invalid_argument);
}

TEST_CASE("f4: worked example sentence lengths") {
  const auto hist = compute_f4(leguin_doc(), FeatureConfig{});
  CHECK(hist.sentence_count == 4);
  REQUIRE(hist.f4.size() == 201);
  CHECK(near(hist.f4[2], 0.25, kTol));
  CHECK(near(hist.f4[9], 0.25, kTol));
  CHECK(near(hist.f4[27], 0.25, kTol));
  CHECK(near(hist.f4[31], 0.25, kTol));
  double total = 0.0;
  for (double v : hist.f4) total += v;
  CHECK(near(total, 1.0, kTol));
}

TEST_CASE("f4: small cases, clamping, and sentence-free documents") {
  const auto yes = compute_f4(tokenize("Yes."), FeatureConfig{});
  CHECK(yes.sentence_count == 1);
  CHECK(yes.f4[1] == 1.0);

  TokenizedDoc three;
  three.seq = {Mark::Period, Mark::Period, Mark::Period};
  three.gaps = {5, 5, 10};
  const auto hist = compute_f4(three, FeatureConfig{});
  CHECK(hist.sentence_count == 3);
  CHECK(near(hist.f4[5], 2.0 / 3, kTol));
  CHECK(near(hist.f4[10], 1.0 / 3, kTol));

  FeatureConfig low;
  low.sentence_cap = 8;
  const auto clamped = compute_f4(three, low);
  REQUIRE(clamped.f4.size() == 9);
  CHECK(near(clamped.f4[5], 2.0 / 3, kTol));
  CHECK(near(clamped.f4[8], 1.0 / 3, kTol));

  // Commas never end a sentence.
  TokenizedDoc commas;
  commas.seq = {Mark::Comma, Mark::Comma};
  commas.gaps = {1, 2};
  const auto none = compute_f4(commas, FeatureConfig{});
  CHECK(none.sentence_count == 0);
  for (double v : none.f4) CHECK(v == 0.0);

  // Zero-length sentences land in bin 0.
  const auto bang = compute_f4(tokenize("?!"), FeatureConfig{});
  CHECK(bang.sentence_count == 2);
  CHECK(bang.f4[0] == 1.0);

  // Sentence lengths span internal commas: "a b, c d." is one sentence
  // of four words.
  const auto spanned = compute_f4(tokenize("a b, c d."), FeatureConfig{});
  CHECK(spanned.sentence_count == 1);
  CHECK(near(spanned.f4[4], 1.0, kTol));
}

TEST_CASE("f5: worked example gap distribution") {
  const auto f5 = compute_f5(leguin_doc().gaps, FeatureConfig{});
  REQUIRE(f5.size() == 41);
  CHECK(near(f5[0], 2.0 / 12, kTol));
  CHECK(near(f5[1], 2.0 / 12, kTol));
  CHECK(f5[3] == 0.0);
  CHECK(near(f5[9], 2.0 / 12, kTol));
  CHECK(near(f5[25], 1.0 / 12, kTol));
  double total = 0.0;
  for (double v : f5) total += v;
  CHECK(near(total, 1.0, kTol));
}

TEST_CASE("f5: constant gaps, clamping, errors") {
  const auto flat = compute_f5({7, 7, 7, 7}, FeatureConfig{});
  CHECK(flat[7] == 1.0);
  for (std::size_t g = 0; g < flat.size(); ++g) {
    if (g != 7) CHECK(flat[g] == 0.0);
  }

  const auto clamped = compute_f5({50, 3}, FeatureConfig{});
  CHECK(near(clamped[40], 0.5, kTol));
  CHECK(near(clamped[3], 0.5, kTol));

  CHECK_THROWS_AS(compute_f5({}, FeatureConfig{}), std::invalid_argument);
}

TEST_CASE("punctuation rate") {
  CHECK(punctuation_rate(leguin_doc().gaps) == 69.0 / 12);
  CHECK(punctuation_rate({0, 0, 0}) == 0.0);
  CHECK_THROWS_AS(punctuation_rate({}), std::invalid_argument);

  // Identity with the gap distribution when nothing clamps.
  rng::Engine eng(23u);
  for (int trial = 0; trial < 50; ++trial) {
    GapSequence gaps;
    const auto len = 1 + rng::bounded(eng, 200);
    for (std::uint64_t i = 0; i < len; ++i) {
      gaps.push_back(static_cast<int>(rng::bounded(eng, 41)));  // <= cap
    }
    const auto f5 = compute_f5(gaps, FeatureConfig{});
    double expect = 0.0;
    for (std::size_t g = 0; g < f5.size(); ++g) expect += static_cast<double>(g) * f5[g];
    CHECK(near(punctuation_rate(gaps), expect, 1e-9));
  }
}

TEST_CASE("W: worked example mean gaps") {
  const auto W = compute_W(leguin_doc());
  CHECK(W[Q_][Q_] == 4.0);
  CHECK(W[Q_][C_] == 1.0);
  CHECK(W[Q_][P_] == 1.0);
  CHECK(W[P_][P_] == 5.5);
  CHECK(W[P_][S_] == 9.0);
  CHECK(W[S_][Q_] == 5.0);
  CHECK(W[S_][S_] == 7.0);
  // Observed pairs whose only gaps are zero:
  CHECK(W[C_][Q_] == 0.0);
  CHECK(W[P_][Q_] == 0.0);
  // The comma->period pair occurs once with six words between.
  CHECK(W[C_][P_] == 6.0);
  // Everything else is unobserved.
  double rest = 0.0;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) rest += W[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  CHECK(near(rest, 4 + 1 + 1 + 5.5 + 9 + 5 + 7 + 6, kTol));
}

TEST_CASE("W: single pair and brute-force comparison") {
  TokenizedDoc doc;
  doc.seq = {Mark::Period, Mark::Comma};
  doc.gaps = {0, 3};
  const auto W = compute_W(doc);
  CHECK(W[P_][C_] == 3.0);

  rng::Engine eng(31u);
  const auto cls = testsup::random_class(eng);
  const auto rnd = testsup::synth_doc(cls, 400, eng);
  const auto Wr = compute_W(rnd);
  std::map<std::pair<int, int>, std::pair<double, int>> groups;
  for (std::size_t l = 0; l + 1 < rnd.seq.size(); ++l) {
    auto& [sum, count] = groups[{mark_index(rnd.seq[l]), mark_index(rnd.seq[l + 1])}];
    sum += rnd.gaps[l + 1];
    ++count;
  }
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      const auto it = groups.find({i, j});
      const double expect = it == groups.end() ? 0.0 : it->second.first / it->second.second;
      CHECK(near(Wr[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], expect, 1e-9));
    }
  }

  CHECK_THROWS_AS(compute_W({"x", {Mark::Period}, {1}}), std::invalid_argument);
}

TEST_CASE("flatten is column-major; unflatten inverts it") {
  Matrix10 ident{};
  for (std::size_t i = 0; i < 10; ++i) ident[i][i] = 1.0;
  const auto flat = flatten(ident);
  REQUIRE(flat.size() == 100);
  for (std::size_t k = 0; k < 100; ++k) {
    CHECK(flat[k] == (k % 11 == 0 ? 1.0 : 0.0));
  }

  // Round trip on an arbitrary matrix.
  Matrix10 m{};
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = 0; j < 10; ++j) m[i][j] = static_cast<double>(10 * i + j);
  const auto rt = unflatten(flatten(m));
  CHECK(rt == m);
  CHECK(flatten(m)[10 * 3 + 2] == m[2][3]);

  CHECK_THROWS_AS(unflatten(std::vector<double>(99)), std::invalid_argument);
}

TEST_CASE("feature_set: worked example assembles all oracles") {
  const FeatureSet fs = feature_set(leguin_doc(), FeatureConfig{});
  CHECK(fs.doc_id == "leguin");
  CHECK(fs.n_marks == 12);
  CHECK(fs.sentence_count == 4);
  CHECK(near(fs.f1[Q_], 1.0 / 3, kTol));
  CHECK(near(fs.P[Q_][C_], 1.0 / 3, kTol));
  CHECK(near(fs.Pt[Q_][C_], 1.0 / 9, kTol));
  CHECK(fs.rate == 5.75);
  // Column-major lookup: (row Comma, col Quote) of Pt sits at 10*8+1.
  CHECK(near(fs.f3[10 * Q_ + C_], 1.0 / 12, kTol));
  CHECK(fs.f2 == flatten(fs.P));
  CHECK(fs.f3 == flatten(fs.Pt));
  CHECK(fs.f6 == flatten(fs.W));
  CHECK(near(fs.f4[31], 0.25, kTol));
  CHECK(near(fs.f5[0], 2.0 / 12, kTol));

  // Determinism.
  const FeatureSet again = feature_set(leguin_doc(), FeatureConfig{});
  CHECK(again.f3 == fs.f3);
  CHECK(again.f4 == fs.f4);
  CHECK(again.rate == fs.rate);

  CHECK_THROWS_AS(feature_set({"x", {Mark::Period}, {1}}, FeatureConfig{}),
                  std::invalid_argument);
}

TEST_CASE("feature_set: joint matrix equals conditional times frequency") {
  rng::Engine eng(41u);
  const auto cls = testsup::random_class(eng);
  const auto doc = testsup::synth_doc(cls, 10000, eng);
  const FeatureSet fs = feature_set(doc, FeatureConfig{});
  for (std::size_t i = 0; i < 10; ++i) {
    if (!fs.row_defined[i]) continue;
    for (std::size_t j = 0; j < 10; ++j) {
      CHECK(near(fs.Pt[i][j], fs.P[i][j] * fs.f1[i], kTol));
    }
  }
}

TEST_CASE("features depend only on punctuation structure, not the words") {
  const FeatureSet a =
      feature_set(tokenize("Red sky, at night; sailors delight. Storm?"), FeatureConfig{});
  const FeatureSet b =
      feature_set(tokenize("Old dog, by door; barked twice. Again?"), FeatureConfig{});
  CHECK(a.f1 == b.f1);
  CHECK(a.f3 == b.f3);
  CHECK(a.f4 == b.f4);
  CHECK(a.f5 == b.f5);
  CHECK(a.f6 == b.f6);
  CHECK(a.rate == b.rate);
}

TEST_CASE("normalization identities hold on random documents") {
  rng::Engine eng(53u);
  for (int trial = 0; trial < 200; ++trial) {
    const auto cls = testsup::random_class(eng);
    const int n = 2 + static_cast<int>(rng::bounded(eng, 400));
    const auto doc = testsup::synth_doc(cls, n, eng);
    const FeatureSet fs = feature_set(doc, FeatureConfig{});

    double s1 = 0.0, s3 = 0.0, s4 = 0.0, s5 = 0.0;
    for (double v : fs.f1) s1 += v;
    for (double v : fs.f3) s3 += v;
    for (double v : fs.f4) s4 += v;
    for (double v : fs.f5) s5 += v;
    CHECK(near(s1, 1.0, kTol));
    CHECK(near(s3, 1.0, kTol));  // generator guarantees full joint mass
    CHECK(near(s5, 1.0, kTol));
    if (fs.sentence_count > 0) CHECK(near(s4, 1.0, kTol));

    double expect_rate = 0.0;
    for (std::size_t g = 0; g < fs.f5.size(); ++g) {
      expect_rate += static_cast<double>(g) * fs.f5[g];
    }
    CHECK(near(fs.rate, expect_rate, 1e-9));  // max_gap < cap: no clamping
  }
}
