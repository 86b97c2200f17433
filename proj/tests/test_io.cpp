#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "punct/classify.hpp"
#include "punct/corpus.hpp"
#include "punct/csv.hpp"
#include "punct/features.hpp"
#include "punct/io.hpp"
#include "punct/net.hpp"
#include "punct/rng.hpp"
#include "punct/tokenizer.hpp"
#include "test_support.hpp"

using namespace punct;
using testsup::near;
using testsup::TempDir;

TEST_CASE("csv: encoding and parsing edge cases") {
  CHECK(csv::encode_row({"a", "b", "c"}) == "a,b,c");
  CHECK(csv::encode_row({"with,comma", "plain"}) == "\"with,comma\",plain");
  CHECK(csv::encode_row({"say \"hi\""}) == "\"say \"\"hi\"\"\"");
  CHECK(csv::encode_row({"line\nbreak"}) == "\"line\nbreak\"");
  CHECK(csv::encode_row({"", ""}) == ",");

  // Round-trip through the parser.
  const csv::Row nasty = {"a,b", "q\"q", "multi\nline", "", "plain"};
  std::istringstream is(csv::encode_row(nasty) + "\n");
  const auto rows = csv::parse(is);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0] == nasty);

  // CRLF input, trailing newline, and a final record without one.
  std::istringstream crlf("a,b\r\nc,d");
  const auto two = csv::parse(crlf);
  REQUIRE(two.size() == 2);
  CHECK(two[0] == csv::Row{"a", "b"});
  CHECK(two[1] == csv::Row{"c", "d"});

  std::istringstream bad("\"unterminated");
  CHECK_THROWS_AS(csv::parse(bad), std::runtime_error);

  CHECK(csv::parse_row("x,\"y,z\"") == csv::Row{"x", "y,z"});
}

TEST_CASE("format_double and parse_double round-trip exactly") {
  const std::vector<double> values = {
      0.0,     1.0,        0.1,     1.0 / 3.0, 5.75,  69.0 / 12.0,
      1e-300,  1e300,      -2.5e-7, 1234567.8901234567,
      std::numeric_limits<double>::min(), std::numeric_limits<double>::max(),
      std::numeric_limits<double>::denorm_min()};
  for (const double v : values) {
    const std::string s = io::format_double(v);
    CHECK(io::parse_double(s) == v);
  }
  CHECK(io::format_double(0.1) == "0.1");
  CHECK(io::format_double(0.5) == "0.5");
  CHECK(io::format_double(0.0) == "0");
  CHECK_THROWS_AS(io::parse_double("not a number"), std::runtime_error);
  CHECK_THROWS_AS(io::parse_double("1.5x"), std::runtime_error);
  CHECK_THROWS_AS(io::parse_double(""), std::runtime_error);

  rng::Engine eng(167u);
  for (int trial = 0; trial < 5000; ++trial) {
    const double v = (rng::unit(eng) - 0.5) * std::pow(10.0, double(rng::bounded(eng, 40)) - 20.0);
    CHECK(io::parse_double(io::format_double(v)) == v);
  }
}

TEST_CASE("atomic_write and read_file") {
  TempDir dir;
  const auto path = dir / "out.txt";
  io::atomic_write(path, "first\n");
  CHECK(io::read_file(path) == "first\n");
  io::atomic_write(path, "second version\n");
  CHECK(io::read_file(path) == "second version\n");

  // No temp droppings left behind.
  int files = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir.path)) {
    (void)e;
    ++files;
  }
  CHECK(files == 1);

  CHECK_THROWS_AS(io::read_file(dir / "missing.txt"), std::runtime_error);
}

TEST_CASE("read_metadata: quoting, optional fields, and validation") {
  TempDir dir;
  const auto path = dir / "metadata.csv";
  io::atomic_write(path,
                   "doc_id,title,author,language,birth_year,death_year,bookshelf,pub_date\n"
                   "11,\"Storms, and Other Weather\",Ada Penwright,en,1850,1910,Poetry,1890\n"
                   "12,\"He said \"\"Go\"\"\",Bram Quill,en,,,Humor,\n"
                   "13,Plain Title,Colm Reed,fr,1800,,,\n");
  const auto rows = io::read_metadata(path);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].doc_id == "11");
  CHECK(rows[0].title == "Storms, and Other Weather");
  CHECK(rows[0].author == "Ada Penwright");
  CHECK(rows[0].birth_year == 1850);
  CHECK(rows[0].death_year == 1910);
  CHECK(rows[0].bookshelf == "Poetry");
  CHECK(rows[0].pub_date == 1890);
  CHECK(rows[1].title == "He said \"Go\"");
  CHECK_FALSE(rows[1].birth_year.has_value());
  CHECK_FALSE(rows[1].pub_date.has_value());
  CHECK(rows[2].language == "fr");
  CHECK(rows[2].birth_year == 1800);
  CHECK_FALSE(rows[2].death_year.has_value());

  io::atomic_write(path, "doc_id,title\n1,X\n");
  CHECK_THROWS_AS(io::read_metadata(path), std::runtime_error);

  io::atomic_write(path,
                   "doc_id,title,author,language,birth_year,death_year,bookshelf,pub_date\n"
                   "1,A,X,en,,,,\n1,B,Y,en,,,,\n");
  CHECK_THROWS_AS(io::read_metadata(path), std::runtime_error);

  io::atomic_write(path,
                   "doc_id,title,author,language,birth_year,death_year,bookshelf,pub_date\n"
                   "1,A,X,en,1950,1900,,\n");
  CHECK_THROWS_AS(io::read_metadata(path), std::runtime_error);

  io::atomic_write(path,
                   "doc_id,title,author,language,birth_year,death_year,bookshelf,pub_date\n"
                   "1,A,X,en,abc,,,\n");
  CHECK_THROWS_AS(io::read_metadata(path), std::runtime_error);
}

namespace {

CorpusManifest sample_manifest() {
  std::vector<DocumentMeta> docs;
  DocumentMeta a;
  a.doc_id = "a1";
  a.title = "Weather, Storms";
  a.author = "Ada";
  a.language = "en";
  a.birth_year = 1850;
  a.death_year = 1910;
  a.bookshelf = "Poetry";
  a.pub_date = 1890;
  docs.push_back(a);
  DocumentMeta b;
  b.doc_id = "b1";
  b.title = "Nuit";
  b.author = "Bram";
  b.language = "fr";
  docs.push_back(b);
  DocumentMeta c;
  c.doc_id = "c1";
  c.title = "Quiet \"Days\"";
  c.author = "Ada";
  c.language = "en";
  docs.push_back(c);
  DocumentMeta d;
  d.doc_id = "d1";
  d.title = "Shelfless";
  d.author = "Ada";
  d.language = "en";
  docs.push_back(d);
  auto manifest = clean(docs, [](const std::string& id) -> std::optional<std::string> {
    if (id == "c1") return "no dialogue";
    return std::string("said \"x\"");
  }, 1);
  manifest.flagged_no_sentinels = 2;
  return manifest;
}

int report_count_of(const CorpusManifest& m, const std::string& rule) {
  for (const auto& [name, count] : m.cleaning_report) {
    if (name == rule) return count;
  }
  return -1;
}

}  // namespace

TEST_CASE("manifest round-trip recomputes the cleaning report") {
  TempDir dir;
  const auto manifest = sample_manifest();
  const auto path = dir / "manifest.csv";
  io::write_manifest(manifest, path);

  const auto back = io::read_manifest(path);
  REQUIRE(back.documents.size() == manifest.documents.size());
  for (std::size_t i = 0; i < back.documents.size(); ++i) {
    const auto& want = manifest.documents[i];
    const auto& got = back.documents[i];
    CHECK(got.meta.doc_id == want.meta.doc_id);
    CHECK(got.meta.title == want.meta.title);
    CHECK(got.meta.author == want.meta.author);
    CHECK(got.meta.language == want.meta.language);
    CHECK(got.meta.birth_year == want.meta.birth_year);
    CHECK(got.meta.death_year == want.meta.death_year);
    CHECK(got.meta.bookshelf == want.meta.bookshelf);
    CHECK(got.meta.pub_date == want.meta.pub_date);
    CHECK(got.retained == want.retained);
    CHECK(got.removal_rule == want.removal_rule);
  }
  CHECK(back.cleaning_report == manifest.cleaning_report);
  // The sentinel flag lives in the report file, not the manifest.
  CHECK(back.flagged_no_sentinels == 0);

  // A non-empty genre_filter row survives the round-trip after the
  // fixed rules; recomputation cannot resurrect zero-count extras.
  auto [subset, warnings] = genre_subset(manifest, {"Poetry"}, 1);
  REQUIRE(report_count_of(subset, rules::kGenreFilter) == 1);  // d1 has no shelf
  io::write_manifest(subset, path);
  const auto back2 = io::read_manifest(path);
  CHECK(back2.cleaning_report == subset.cleaning_report);

  io::atomic_write(path, "not,a,manifest\n");
  CHECK_THROWS_AS(io::read_manifest(path), std::runtime_error);
}

TEST_CASE("cleaning report file layout") {
  TempDir dir;
  const auto manifest = sample_manifest();
  const auto path = dir / "cleaning_report.csv";
  io::write_cleaning_report(manifest, path);
  const std::string text = io::read_file(path);
  std::istringstream is(text);
  const auto rows = csv::parse(is);
  REQUIRE(rows.size() == 2 + manifest.cleaning_report.size());
  CHECK(rows[0] == csv::Row{"rule", "count"});
  CHECK(rows[1] == csv::Row{"language", "1"});
  CHECK(rows.back() == csv::Row{"no_header_sentinels", "2"});
  int no_quotes = -1;
  for (const auto& row : rows) {
    if (row[0] == "no_quotes") no_quotes = std::stoi(row[1]);
  }
  CHECK(no_quotes == 1);
}

namespace {

std::vector<FeatureSet> sample_features(const FeatureConfig& cfg) {
  rng::Engine eng(173u);
  std::vector<FeatureSet> sets;
  sets.push_back(feature_set(testsup::leguin_doc(), cfg));
  for (int i = 0; i < 3; ++i) {
    const auto cls = testsup::random_class(eng);
    auto doc = testsup::synth_doc(cls, 150 + 50 * i, eng);
    doc.doc_id = "synth" + std::to_string(i);
    sets.push_back(feature_set(doc, cfg));
  }
  return sets;
}

void check_feature_roundtrip(const std::vector<FeatureSet>& sets,
                             const std::vector<FeatureSet>& back) {
  REQUIRE(back.size() == sets.size());
  for (std::size_t k = 0; k < sets.size(); ++k) {
    const FeatureSet& want = sets[k];
    const FeatureSet& got = back[k];
    CHECK(got.doc_id == want.doc_id);
    // Stored fields come back bit-identical.
    CHECK(got.f1 == want.f1);
    CHECK(got.f3 == want.f3);
    CHECK(got.f4 == want.f4);
    CHECK(got.f5 == want.f5);
    CHECK(got.f6 == want.f6);
    CHECK(got.rate == want.rate);
    CHECK(got.W == want.W);
    CHECK(got.Pt == want.Pt);
    CHECK(got.row_defined == want.row_defined);
    // P is reconstructed by division, exact up to the final rounding.
    for (int i = 0; i < 10; ++i) {
      for (int j = 0; j < 10; ++j) {
        CHECK(near(got.P[i][j], want.P[i][j], 1e-14));
        CHECK(near(got.f2[static_cast<std::size_t>(10 * j + i)], want.P[i][j], 1e-14));
      }
    }
    // Counts are not stored.
    CHECK(got.n_marks == 0);
    CHECK(got.sentence_count == 0);
  }
}

}  // namespace

TEST_CASE("feature store round-trips: csv and binary") {
  TempDir dir;
  FeatureConfig cfg;
  cfg.gap_cap = 25;  // non-default caps must survive the header
  cfg.sentence_cap = 60;
  const auto sets = sample_features(cfg);

  const auto csv_path = dir / "features.csv";
  io::write_features_csv(sets, cfg, csv_path);
  const auto [csv_back, csv_cfg] = io::read_features_csv(csv_path);
  CHECK(csv_cfg.gap_cap == cfg.gap_cap);
  CHECK(csv_cfg.sentence_cap == cfg.sentence_cap);
  check_feature_roundtrip(sets, csv_back);

  const auto bin_path = dir / "features.bin";
  io::write_features_binary(sets, cfg, bin_path);
  const auto [bin_back, bin_cfg] = io::read_features_binary(bin_path);
  CHECK(bin_cfg.gap_cap == cfg.gap_cap);
  CHECK(bin_cfg.sentence_cap == cfg.sentence_cap);
  check_feature_roundtrip(sets, bin_back);

  io::atomic_write(csv_path, "#wrong,v=1\n");
  CHECK_THROWS_AS(io::read_features_csv(csv_path), std::runtime_error);
  io::atomic_write(bin_path, "short");
  CHECK_THROWS_AS(io::read_features_binary(bin_path), std::runtime_error);
}

TEST_CASE("token records round-trip") {
  TempDir dir;
  std::vector<TokenizedDoc> docs;
  docs.push_back(tokenize(normalize_text(testsup::kLeGuinText), "leguin"));
  docs.push_back(tokenize("Wait... what?! Not now; later, maybe.", "d2"));
  TokenizedDoc empty;
  empty.doc_id = "empty";
  docs.push_back(empty);

  const auto path = dir / "tokens.tsv";
  io::write_tokens(docs, path);
  const auto back = io::read_tokens(path);
  REQUIRE(back.size() == docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    CHECK(back[i].doc_id == docs[i].doc_id);
    CHECK(back[i].seq == docs[i].seq);
    CHECK(back[i].gaps == docs[i].gaps);
  }

  TokenizedDoc bad;
  bad.doc_id = "tab\tinside";
  CHECK_THROWS_AS(io::write_tokens({bad}, dir / "bad.tsv"), std::runtime_error);
}

TEST_CASE("class model round-trip is exact") {
  TempDir dir;
  FeatureConfig cfg;
  const auto sets = sample_features(cfg);
  std::vector<std::pair<std::string, const FeatureSet*>> train;
  train.emplace_back("alpha", &sets[0]);
  train.emplace_back("alpha", &sets[1]);
  train.emplace_back("beta", &sets[2]);
  train.emplace_back("beta", &sets[3]);
  const auto model = build_profiles(train);

  const auto path = dir / "model_kl.csv";
  io::save_class_model(model, path);
  const auto back = io::load_class_model(path);
  CHECK(back.class_ids == model.class_ids);
  REQUIRE(back.profiles.size() == model.profiles.size());
  for (std::size_t c = 0; c < model.profiles.size(); ++c) {
    CHECK(back.profiles[c].f1 == model.profiles[c].f1);
    CHECK(back.profiles[c].f3 == model.profiles[c].f3);
    CHECK(back.profiles[c].f4 == model.profiles[c].f4);
    CHECK(back.profiles[c].f5 == model.profiles[c].f5);
  }

  io::atomic_write(path, "#wrong\n");
  CHECK_THROWS_AS(io::load_class_model(path), std::runtime_error);
}

TEST_CASE("net model round-trip is exact") {
  TempDir dir;
  rng::Engine eng(179u);
  std::vector<std::pair<std::string, std::vector<double>>> data;
  for (int i = 0; i < 8; ++i) {
    data.emplace_back(i % 2 ? "hi" : "lo",
                      std::vector<double>{rng::unit(eng), rng::unit(eng),
                                          (i % 2 ? 1.0 : -1.0) + rng::unit(eng)});
  }
  NetConfig cfg;
  cfg.hidden_units = 5;
  cfg.epochs = 10;
  cfg.batch_size = 3;
  cfg.seed = 21;
  cfg.activation = Activation::Tanh;
  const auto net = net_train(data, cfg);

  const auto path = dir / "model_net.csv";
  io::save_net(net, path);
  const auto back = io::load_net(path);
  CHECK(back.input_dim == net.input_dim);
  CHECK(back.activation == net.activation);
  CHECK(back.class_ids == net.class_ids);
  CHECK(back.W1 == net.W1);
  CHECK(back.b1 == net.b1);
  CHECK(back.W2 == net.W2);
  CHECK(back.b2 == net.b2);
  CHECK(back.final_epoch_loss == net.final_epoch_loss);

  // Predictions from the reloaded net are bit-identical.
  const auto [l1, p1] = net_predict(net, data[0].second);
  const auto [l2, p2] = net_predict(back, data[0].second);
  CHECK(l1 == l2);
  CHECK(p1 == p2);

  io::atomic_write(path, "#wrong\n");
  CHECK_THROWS_AS(io::load_net(path), std::runtime_error);
}
