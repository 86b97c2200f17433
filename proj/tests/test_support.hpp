#pragma once

// Shared helpers for the unit and acceptance suites: the worked-example
// passage with its hand-checked tokenization, a scratch-directory guard,
// and seeded synthetic document generators.

#include <array>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "punct/features.hpp"
#include "punct/marks.hpp"
#include "punct/rng.hpp"

namespace testsup {

// Ursula K. Le Guin, from an essay in The Wave in the Mind (2004).
// Hand-tokenized below; frozen as the primary oracle for the tokenizer
// and every feature computation.
inline const char* kLeGuinText =
    "I don't have a gun and I don't have even one wife and my sentences "
    "tend to go on and on and on, with all this syntax in them. Ernest "
    "Hemingway would have died rather than have syntax. Or semicolons. "
    "I use a whole lot of half-assed semicolons; there was one of them "
    "just now; that was a semicolon after \"semicolons,\" and another "
    "one after \"now.\"";

using punct::Mark;

inline const punct::MarkSequence kLeGuinSeq = {
    Mark::Comma,     Mark::Period, Mark::Period, Mark::Period,
    Mark::Semicolon, Mark::Semicolon, Mark::Quote, Mark::Comma,
    Mark::Quote,     Mark::Quote,  Mark::Period, Mark::Quote};

// kLeGuinGaps[l] = words immediately before mark l ("don't" and
// "half-assed" both count as two words).
inline const punct::GapSequence kLeGuinGaps = {25, 6, 9, 2, 9, 7,
                                               5,  1, 0, 4, 1, 0};

inline punct::TokenizedDoc leguin_doc(std::string doc_id = "leguin") {
  return {std::move(doc_id), kLeGuinSeq, kLeGuinGaps};
}

/// Unique scratch directory, removed on destruction.
struct TempDir {
  std::filesystem::path path;

  TempDir() {
    std::string tmpl =
        (std::filesystem::temp_directory_path() / "punct_test_XXXXXX").string();
    if (!mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
    path = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path operator/(const std::string& name) const { return path / name; }
};

/// A synthetic "author": a full-support random transition structure plus
/// a gap range. Documents drawn from different SynthClass instances are
/// separable by their transition statistics.
struct SynthClass {
  std::array<std::array<double, 10>, 10> trans{};  // positive weights
  std::array<double, 10> start{};                  // positive weights
  int max_gap = 12;
};

inline SynthClass random_class(punct::rng::Engine& eng) {
  SynthClass c;
  for (auto& row : c.trans)
    for (double& w : row) w = 1.0 + static_cast<double>(punct::rng::bounded(eng, 30));
  for (double& w : c.start) w = 1.0 + static_cast<double>(punct::rng::bounded(eng, 30));
  return c;
}

/// Draws a document of n_marks from the class chain. The final mark is
/// forced to repeat the first mark's type, so every occurring type has
/// an occurrence with a successor (keeps the joint matrix a full
/// distribution). Gaps stay in [0, max_gap].
inline punct::TokenizedDoc synth_doc(const SynthClass& c, int n_marks,
                                     punct::rng::Engine& eng,
                                     std::string doc_id = "synth") {
  punct::TokenizedDoc doc;
  doc.doc_id = std::move(doc_id);
  int state = punct::rng::categorical(c.start, eng);
  for (int i = 0; i < n_marks; ++i) {
    doc.seq.push_back(static_cast<Mark>(state));
    doc.gaps.push_back(static_cast<int>(
        punct::rng::bounded(eng, static_cast<std::uint64_t>(c.max_gap) + 1)));
    state = punct::rng::categorical(c.trans[static_cast<std::size_t>(state)], eng);
  }
  if (n_marks >= 2) doc.seq.back() = doc.seq.front();
  return doc;
}

/// Uniform random distribution of the given length (entries sum to 1).
inline std::vector<double> random_distribution(std::size_t len,
                                               punct::rng::Engine& eng) {
  std::vector<double> p(len);
  double total = 0.0;
  for (double& v : p) {
    v = punct::rng::unit(eng) + 1e-9;
    total += v;
  }
  for (double& v : p) v /= total;
  return p;
}

inline bool near(double a, double b, double tol) {
  double d = a - b;
  return (d < 0 ? -d : d) <= tol;
}

}  // namespace testsup
