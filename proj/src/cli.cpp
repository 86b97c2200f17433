#include "punct/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "punct/corpus.hpp"
#include "punct/csv.hpp"
#include "punct/divergence.hpp"
#include "punct/io.hpp"
#include "punct/svg.hpp"
#include "punct/temporal.hpp"
#include "punct/tokenizer.hpp"

namespace punct::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::string to_json(const RunConfig& cfg) {
  json j;
  j["corpus_dir"] = cfg.corpus_dir;
  j["metadata_path"] = cfg.metadata_path;
  j["out_dir"] = cfg.out_dir;
  j["genre_list_path"] = cfg.genre_list_path;
  j["palette_path"] = cfg.palette_path;
  j["gap_cap"] = cfg.features.gap_cap;
  j["sentence_cap"] = cfg.features.sentence_cap;
  json ends = json::array();
  for (Mark m : cfg.features.sentence_end) ends.push_back(mark_index(m));
  j["sentence_end"] = ends;
  j["train_ratio"] = cfg.split.train_ratio;
  j["split_seed"] = cfg.split.seed;
  j["hidden_units"] = cfg.net.hidden_units;
  j["epochs"] = cfg.net.epochs;
  j["learning_rate"] = cfg.net.learning_rate;
  j["batch_size"] = cfg.net.batch_size;
  j["net_seed"] = cfg.net.seed;
  j["activation"] = cfg.net.activation == Activation::Relu ? "relu" : "tanh";
  j["seed"] = cfg.seed;
  j["min_docs"] = cfg.min_docs;
  j["author_min_docs"] = cfg.author_min_docs;
  j["bins_start"] = cfg.bins_start;
  j["bin_width"] = cfg.bin_width;
  j["range_lo"] = cfg.range_lo;
  j["range_hi"] = cfg.range_hi;
  j["class_by"] = cfg.class_by;
  j["mode"] = cfg.mode;
  j["feature_arg"] = cfg.feature_arg;
  j["doc_id"] = cfg.doc_id;
  j["render_length"] = cfg.render_length;
  j["tokens_out"] = cfg.tokens_out;
  j["binary_store"] = cfg.binary_store;
  return j.dump(2) + "\n";
}

RunConfig from_json(const std::string& text) {
  const json j = json::parse(text);
  RunConfig cfg;
  cfg.corpus_dir = j.value("corpus_dir", cfg.corpus_dir);
  cfg.metadata_path = j.value("metadata_path", cfg.metadata_path);
  cfg.out_dir = j.value("out_dir", cfg.out_dir);
  cfg.genre_list_path = j.value("genre_list_path", cfg.genre_list_path);
  cfg.palette_path = j.value("palette_path", cfg.palette_path);
  cfg.features.gap_cap = j.value("gap_cap", cfg.features.gap_cap);
  cfg.features.sentence_cap = j.value("sentence_cap", cfg.features.sentence_cap);
  if (j.contains("sentence_end")) {
    cfg.features.sentence_end.clear();
    for (const auto& v : j.at("sentence_end")) {
      const int i = v.get<int>();
      if (i < 0 || i >= kMarkCount) throw std::runtime_error("sentence_end index out of range");
      cfg.features.sentence_end.push_back(static_cast<Mark>(i));
    }
  }
  cfg.split.train_ratio = j.value("train_ratio", cfg.split.train_ratio);
  cfg.split.seed = j.value("split_seed", cfg.split.seed);
  cfg.net.hidden_units = j.value("hidden_units", cfg.net.hidden_units);
  cfg.net.epochs = j.value("epochs", cfg.net.epochs);
  cfg.net.learning_rate = j.value("learning_rate", cfg.net.learning_rate);
  cfg.net.batch_size = j.value("batch_size", cfg.net.batch_size);
  cfg.net.seed = j.value("net_seed", cfg.net.seed);
  if (j.contains("activation")) {
    const std::string a = j.at("activation").get<std::string>();
    if (a == "relu") cfg.net.activation = Activation::Relu;
    else if (a == "tanh") cfg.net.activation = Activation::Tanh;
    else throw std::runtime_error("unknown activation '" + a + "'");
  }
  cfg.seed = j.value("seed", cfg.seed);
  cfg.min_docs = j.value("min_docs", cfg.min_docs);
  cfg.author_min_docs = j.value("author_min_docs", cfg.author_min_docs);
  cfg.bins_start = j.value("bins_start", cfg.bins_start);
  cfg.bin_width = j.value("bin_width", cfg.bin_width);
  cfg.range_lo = j.value("range_lo", cfg.range_lo);
  cfg.range_hi = j.value("range_hi", cfg.range_hi);
  cfg.class_by = j.value("class_by", cfg.class_by);
  cfg.mode = j.value("mode", cfg.mode);
  cfg.feature_arg = j.value("feature_arg", cfg.feature_arg);
  cfg.doc_id = j.value("doc_id", cfg.doc_id);
  cfg.render_length = j.value("render_length", cfg.render_length);
  cfg.tokens_out = j.value("tokens_out", cfg.tokens_out);
  cfg.binary_store = j.value("binary_store", cfg.binary_store);
  return cfg;
}

namespace {

void write_run_record(const RunConfig& cfg, const std::string& command) {
  io::atomic_write(fs::path(cfg.out_dir) / ("run_" + command + ".json"), to_json(cfg));
}

void ensure_out_dir(const RunConfig& cfg) {
  if (cfg.out_dir.empty()) throw std::runtime_error("output directory not set");
  fs::create_directories(cfg.out_dir);
}

fs::path doc_path(const RunConfig& cfg, const std::string& doc_id) {
  return fs::path(cfg.corpus_dir) / (doc_id + ".txt");
}

/// Feature selector strings accepted by --feature: "1", "3", "4", "5",
/// "all", or a comma list of those.
std::vector<std::string> parse_feature_specs(const std::string& arg) {
  std::vector<std::string> specs;
  std::string item;
  std::istringstream is(arg);
  while (std::getline(is, item, ',')) {
    if (item != "1" && item != "3" && item != "4" && item != "5" && item != "all") {
      throw std::runtime_error("unknown feature selector '" + item + "' (want 1, 3, 4, 5 or all)");
    }
    if (std::find(specs.begin(), specs.end(), item) == specs.end()) specs.push_back(item);
  }
  if (specs.empty()) throw std::runtime_error("empty feature selector");
  return specs;
}

FeatureIndex feature_from_spec(const std::string& spec) {
  if (spec == "1") return FeatureIndex::F1;
  if (spec == "3") return FeatureIndex::F3;
  if (spec == "4") return FeatureIndex::F4;
  if (spec == "5") return FeatureIndex::F5;
  throw std::runtime_error("feature selector '" + spec + "' is not a single distribution");
}

/// KL analyses work on single distributions, so "all" expands to the
/// four selectable families.
std::vector<FeatureIndex> kl_feature_list(const std::string& arg) {
  std::vector<FeatureIndex> out;
  for (const auto& spec : parse_feature_specs(arg)) {
    if (spec == "all") {
      for (FeatureIndex f : kKlFeatures)
        if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(f);
    } else {
      const FeatureIndex f = feature_from_spec(spec);
      if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(f);
    }
  }
  return out;
}

/// Network input for one selector; "all" is the full concatenation
/// f1 + f2 + f3 + f4 + f5 + f6.
std::vector<double> net_input(const FeatureSet& fs, const std::string& spec) {
  std::vector<double> v;
  if (spec == "all") {
    v.insert(v.end(), fs.f1.begin(), fs.f1.end());
    v.insert(v.end(), fs.f2.begin(), fs.f2.end());
    v.insert(v.end(), fs.f3.begin(), fs.f3.end());
    v.insert(v.end(), fs.f4.begin(), fs.f4.end());
    v.insert(v.end(), fs.f5.begin(), fs.f5.end());
    v.insert(v.end(), fs.f6.begin(), fs.f6.end());
    return v;
  }
  const auto view = feature_view(fs, feature_from_spec(spec));
  return {view.begin(), view.end()};
}

std::vector<std::string> read_genre_list(const fs::path& path) {
  const std::string text = io::read_file(path);
  std::vector<std::string> genres;
  std::string line;
  std::istringstream is(text);
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto b = line.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t");
    line = line.substr(b, e - b + 1);
    if (line.empty() || line[0] == '#') continue;
    genres.push_back(line);
  }
  return genres;
}

/// Feature records for the retained documents of a manifest, labeled by
/// author or by genre. Genre labeling restricts the manifest through the
/// genre list first. Documents without a feature record (skipped at
/// extraction) drop out silently; the extraction skip report names them.
std::vector<std::pair<std::string, const FeatureSet*>> labeled_docs(
    const RunConfig& cfg, const CorpusManifest& manifest,
    const std::vector<FeatureSet>& store) {
  std::map<std::string, const FeatureSet*> by_id;
  for (const auto& fsrec : store) by_id.emplace(fsrec.doc_id, &fsrec);

  const CorpusManifest* source = &manifest;
  CorpusManifest genre_manifest;
  if (cfg.class_by == "genre") {
    if (cfg.genre_list_path.empty()) {
      throw std::runtime_error("--class-by genre needs --genre-list");
    }
    auto [sub, warnings] = genre_subset(manifest, read_genre_list(cfg.genre_list_path),
                                        cfg.min_docs);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    genre_manifest = std::move(sub);
    source = &genre_manifest;
  } else if (cfg.class_by != "author") {
    throw std::runtime_error("unknown --class-by '" + cfg.class_by + "' (want author or genre)");
  }

  std::vector<std::pair<std::string, const FeatureSet*>> docs;
  for (const auto& entry : source->documents) {
    if (!entry.retained) continue;
    const auto it = by_id.find(entry.meta.doc_id);
    if (it == by_id.end()) continue;
    docs.emplace_back(cfg.class_by == "genre" ? entry.meta.bookshelf : entry.meta.author,
                      it->second);
  }
  return docs;
}

CorpusManifest load_manifest(const RunConfig& cfg) {
  return io::read_manifest(fs::path(cfg.out_dir) / "manifest.csv");
}

std::pair<std::vector<FeatureSet>, FeatureConfig> load_store(const RunConfig& cfg) {
  return io::read_features_csv(fs::path(cfg.out_dir) / "features.csv");
}

int fail(const std::string& command, const std::exception& err) {
  std::cerr << command << ": error: " << err.what() << "\n";
  return 1;
}

}  // namespace

int cmd_ingest(const RunConfig& cfg) try {
  if (!fs::is_directory(cfg.corpus_dir)) {
    throw std::runtime_error("corpus directory '" + cfg.corpus_dir + "' is not readable");
  }
  ensure_out_dir(cfg);
  const auto metadata = io::read_metadata(cfg.metadata_path);

  int flagged = 0;
  const BodyAccessor body_of = [&](const std::string& doc_id) -> std::optional<std::string> {
    std::string text;
    try {
      text = io::read_file(doc_path(cfg, doc_id));
    } catch (const std::exception&) {
      return std::nullopt;
    }
    StrippedText stripped = strip_header(text);
    if (!stripped.found_sentinel) ++flagged;
    // The quote-presence rule must see repaired text, so unicode quote
    // variants count.
    return normalize_text(stripped.body);
  };

  CorpusManifest manifest = clean(metadata, body_of, cfg.author_min_docs);
  manifest.flagged_no_sentinels = flagged;

  io::write_manifest(manifest, fs::path(cfg.out_dir) / "manifest.csv");
  io::write_cleaning_report(manifest, fs::path(cfg.out_dir) / "cleaning_report.csv");

  std::map<std::string, int> authors;
  for (const auto& entry : manifest.documents)
    if (entry.retained) ++authors[entry.meta.author];
  std::cerr << "ingest: " << metadata.size() << " documents in, " << retained_count(manifest)
            << " retained, " << authors.size() << " authors\n";
  for (const auto& [rule, count] : manifest.cleaning_report) {
    std::cerr << "ingest: removed " << count << " under " << rule << "\n";
  }
  std::cerr << "ingest: " << flagged << " documents had no boilerplate sentinels\n";

  write_run_record(cfg, "ingest");
  return 0;
} catch (const std::exception& err) {
  return fail("ingest", err);
}

int cmd_features(const RunConfig& cfg) try {
  ensure_out_dir(cfg);
  const CorpusManifest manifest = load_manifest(cfg);

  std::vector<FeatureSet> sets;
  std::vector<TokenizedDoc> tokens;
  std::vector<csv::Row> skips = {{"doc_id", "reason"}};
  for (const auto& entry : manifest.documents) {
    if (!entry.retained) continue;
    const auto& doc_id = entry.meta.doc_id;
    std::string text;
    try {
      text = io::read_file(doc_path(cfg, doc_id));
    } catch (const std::exception&) {
      skips.push_back({doc_id, "unreadable"});
      continue;
    }
    TokenizedDoc doc = tokenize(normalize_text(strip_header(text).body), doc_id);
    if (doc.seq.size() < 2) {
      skips.push_back({doc_id, "fewer than 2 marks"});
      continue;
    }
    sets.push_back(feature_set(doc, cfg.features));
    if (!cfg.tokens_out.empty()) tokens.push_back(std::move(doc));
  }

  io::write_features_csv(sets, cfg.features, fs::path(cfg.out_dir) / "features.csv");
  if (cfg.binary_store) {
    io::write_features_binary(sets, cfg.features, fs::path(cfg.out_dir) / "features.bin");
  }
  if (!cfg.tokens_out.empty()) io::write_tokens(tokens, cfg.tokens_out);

  std::ostringstream skip_csv;
  for (const auto& row : skips) csv::write_row(skip_csv, row);
  io::atomic_write(fs::path(cfg.out_dir) / "skips.csv", skip_csv.str());

  std::cerr << "features: " << sets.size() << " records, " << skips.size() - 1 << " skipped\n";
  write_run_record(cfg, "features");
  return 0;
} catch (const std::exception& err) {
  return fail("features", err);
}

int cmd_consistency(const RunConfig& cfg) try {
  ensure_out_dir(cfg);
  const CorpusManifest manifest = load_manifest(cfg);
  const auto store = load_store(cfg).first;
  const auto docs = labeled_docs(cfg, manifest, store);

  std::map<std::string, std::vector<const FeatureSet*>> by_class;
  for (const auto& [label, fsrec] : docs) by_class[label].push_back(fsrec);

  std::vector<std::pair<std::string, const FeatureSet*>> usable;
  for (const auto& [label, members] : by_class) {
    if (members.size() < 2) {
      std::cerr << "consistency: skipping class '" << label << "' with " << members.size()
                << " document(s)\n";
      continue;
    }
    for (const FeatureSet* fsrec : members) usable.emplace_back(label, fsrec);
  }
  std::erase_if(by_class, [](const auto& kv) { return kv.second.size() < 2; });
  if (by_class.size() < 2) {
    throw std::runtime_error("need at least 2 classes with 2+ documents, have " +
                             std::to_string(by_class.size()));
  }

  for (FeatureIndex which : kl_feature_list(cfg.feature_arg)) {
    std::vector<ConsistencyResult> results;
    for (const auto& [label, members] : by_class) {
      ConsistencyResult r = consistency(members, which);
      r.class_id = label;
      results.push_back(std::move(r));
    }
    // Least consistent (highest mean divergence) first.
    std::stable_sort(results.begin(), results.end(),
                     [](const ConsistencyResult& a, const ConsistencyResult& b) {
                       return a.mean_kl > b.mean_kl;
                     });
    const double base = baseline(usable, which, 1000, cfg.seed);

    std::ostringstream os;
    csv::write_row(os, {"class_id", "n_docs", "n_pairs", "mean_kl", "std_kl"});
    for (const auto& r : results) {
      const auto m = by_class.at(r.class_id).size();
      csv::write_row(os, {r.class_id, std::to_string(m), std::to_string(r.n_pairs),
                          io::format_double(r.mean_kl), io::format_double(r.std_kl)});
    }
    csv::write_row(os, {"__baseline__", std::to_string(usable.size()), "1000",
                        io::format_double(base), ""});
    const std::string name =
        "consistency_" + cfg.class_by + "_" + feature_name(which) + ".csv";
    io::atomic_write(fs::path(cfg.out_dir) / name, os.str());
    std::cerr << "consistency: wrote " << name << " (" << results.size() << " classes)\n";
  }

  write_run_record(cfg, "consistency");
  return 0;
} catch (const std::exception& err) {
  return fail("consistency", err);
}

int cmd_classify(const RunConfig& cfg) try {
  ensure_out_dir(cfg);
  const CorpusManifest manifest = load_manifest(cfg);
  const auto store = load_store(cfg).first;
  const auto docs = labeled_docs(cfg, manifest, store);
  if (docs.empty()) throw std::runtime_error("no labeled documents with feature records");

  std::vector<std::string> labels;
  labels.reserve(docs.size());
  for (const auto& [label, fsrec] : docs) labels.push_back(label);
  const Split split = stratified_split(labels, cfg.split);

  std::vector<std::pair<std::string, const FeatureSet*>> train;
  std::map<std::string, int> train_counts, test_counts;
  for (std::size_t i : split.train) {
    train.push_back(docs[i]);
    ++train_counts[docs[i].first];
  }
  for (std::size_t i : split.test) ++test_counts[docs[i].first];
  const double base = baseline_accuracy(train_counts, test_counts);

  std::ostringstream os;
  csv::write_row(os, {"n_classes", "train_size", "test_size", "feature", "accuracy", "baseline"});
  const auto emit = [&](const std::string& feature, double accuracy) {
    csv::write_row(os, {std::to_string(train_counts.size()), std::to_string(split.train.size()),
                        std::to_string(split.test.size()), feature,
                        io::format_double(accuracy), io::format_double(base)});
  };

  if (cfg.mode == "kl") {
    const ClassModel model = build_profiles(train);
    for (FeatureIndex which : kl_feature_list(cfg.feature_arg)) {
      std::vector<std::string> predictions, truth;
      for (std::size_t i : split.test) {
        predictions.push_back(kl_classify(*docs[i].second, model, which));
        truth.push_back(docs[i].first);
      }
      emit(feature_name(which), evaluate(predictions, truth));
    }
    io::save_class_model(model, fs::path(cfg.out_dir) / ("model_kl_" + cfg.class_by + ".csv"));
  } else if (cfg.mode == "net") {
    for (const std::string& spec : parse_feature_specs(cfg.feature_arg)) {
      std::vector<std::pair<std::string, std::vector<double>>> samples;
      for (std::size_t i : split.train) {
        samples.emplace_back(docs[i].first, net_input(*docs[i].second, spec));
      }
      const TrainedNet net = net_train(samples, cfg.net);
      std::vector<std::string> predictions, truth;
      for (std::size_t i : split.test) {
        predictions.push_back(net_predict(net, net_input(*docs[i].second, spec)).first);
        truth.push_back(docs[i].first);
      }
      const std::string feature = spec == "all" ? "all" : std::string("f") + spec;
      emit(feature, evaluate(predictions, truth));
      io::save_net(net, fs::path(cfg.out_dir) /
                            ("model_net_" + cfg.class_by + "_" + feature + ".csv"));
    }
  } else {
    throw std::runtime_error("unknown --mode '" + cfg.mode + "' (want kl or net)");
  }

  const std::string name = "classify_" + cfg.mode + "_" + cfg.class_by + ".csv";
  io::atomic_write(fs::path(cfg.out_dir) / name, os.str());
  std::cerr << "classify: wrote " << name << "\n";

  write_run_record(cfg, "classify");
  return 0;
} catch (const std::exception& err) {
  return fail("classify", err);
}

int cmd_temporal(const RunConfig& cfg) try {
  ensure_out_dir(cfg);
  const CorpusManifest manifest = load_manifest(cfg);
  const auto store = load_store(cfg).first;
  std::map<std::string, const FeatureSet*> by_id;
  for (const auto& fsrec : store) by_id.emplace(fsrec.doc_id, &fsrec);

  std::vector<TemporalDoc> dated;
  std::vector<std::pair<DocumentMeta, const FeatureSet*>> published;
  for (const auto& entry : manifest.documents) {
    if (!entry.retained) continue;
    const auto it = by_id.find(entry.meta.doc_id);
    if (it == by_id.end()) continue;
    if (const auto year = middle_year(entry.meta)) {
      dated.push_back({*year, it->second});
    }
    if (entry.meta.pub_date) published.emplace_back(entry.meta, it->second);
  }

  const auto in_range = filter_range(dated, cfg.range_lo, cfg.range_hi);
  const auto bins = aggregate(in_range, {cfg.bins_start, cfg.bin_width});

  std::ostringstream os;
  csv::Row header = {"bin_start", "count"};
  for (int i = 0; i < kMarkCount; ++i) {
    header.push_back(std::string("mean_f1_") + mark_name(static_cast<Mark>(i)));
  }
  header.push_back("mean_rate");
  csv::write_row(os, header);
  for (const auto& bin : bins) {
    csv::Row row = {std::to_string(bin.bin_start), std::to_string(bin.count)};
    for (double v : bin.mean_f1) row.push_back(io::format_double(v));
    row.push_back(io::format_double(bin.mean_rate));
    csv::write_row(os, row);
  }
  io::atomic_write(fs::path(cfg.out_dir) / "temporal_bins.csv", os.str());
  std::cerr << "temporal: wrote temporal_bins.csv (" << bins.size() << " bins, "
            << in_range.size() << " documents)\n";

  if (published.empty()) {
    std::cerr << "temporal: no publication dates in metadata; skipping author_series.csv\n";
  } else {
    std::ostringstream ss;
    csv::Row shead = {"year", "doc_id"};
    for (int i = 0; i < kMarkCount; ++i) {
      shead.push_back(std::string("f1_") + mark_name(static_cast<Mark>(i)));
    }
    shead.push_back("rate");
    csv::write_row(ss, shead);
    for (const auto& point : author_series(published)) {
      csv::Row row = {std::to_string(point.year), point.doc_id};
      for (double v : point.f1) row.push_back(io::format_double(v));
      row.push_back(io::format_double(point.rate));
      csv::write_row(ss, row);
    }
    io::atomic_write(fs::path(cfg.out_dir) / "author_series.csv", ss.str());
    std::cerr << "temporal: wrote author_series.csv (" << published.size() << " documents)\n";
  }

  write_run_record(cfg, "temporal");
  return 0;
} catch (const std::exception& err) {
  return fail("temporal", err);
}

int cmd_render(const RunConfig& cfg) try {
  if (cfg.doc_id.empty()) throw std::runtime_error("no document id given");
  ensure_out_dir(cfg);
  std::string text;
  try {
    text = io::read_file(doc_path(cfg, cfg.doc_id));
  } catch (const std::exception&) {
    throw std::runtime_error("unknown doc_id '" + cfg.doc_id + "'");
  }
  const TokenizedDoc doc =
      tokenize(normalize_text(strip_header(text).body), cfg.doc_id);
  if (doc.seq.empty()) throw std::runtime_error("document has no punctuation marks");
  if (cfg.render_length < 1) throw std::runtime_error("render length must be >= 1");

  Palette palette = default_palette();
  if (!cfg.palette_path.empty()) {
    const json j = json::parse(io::read_file(cfg.palette_path));
    const auto& colors = j.at("colors");
    if (!colors.is_array() || colors.size() != 10) {
      throw std::runtime_error("palette file needs a 10-entry \"colors\" array");
    }
    for (int i = 0; i < kMarkCount; ++i) {
      palette.colors[i] = colors[i].get<std::string>();
    }
  }

  const std::size_t start = doc.seq.size() / 2;
  const std::string svg = render_strip(doc.seq, start,
                                       static_cast<std::size_t>(cfg.render_length), palette);
  const std::string name = "strip_" + cfg.doc_id + ".svg";
  io::atomic_write(fs::path(cfg.out_dir) / name, svg);
  std::cerr << "render: wrote " << name << " (" << doc.seq.size() << " marks, start " << start
            << ")\n";

  write_run_record(cfg, "render");
  return 0;
} catch (const std::exception& err) {
  return fail("render", err);
}

}  // namespace punct::cli
