#include "punct/io.hpp"

#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "punct/csv.hpp"

namespace punct::io {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  if (res.ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
  double v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw std::runtime_error("expected a number, got '" + std::string(s) + "'");
  }
  return v;
}

namespace {

long parse_long(std::string_view s) {
  long v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw std::runtime_error("expected an integer, got '" + std::string(s) + "'");
  }
  return v;
}

int parse_int(std::string_view s) { return static_cast<int>(parse_long(s)); }

std::optional<int> parse_opt_int(std::string_view s) {
  if (s.empty()) return std::nullopt;
  return parse_int(s);
}

std::string opt_to_string(const std::optional<int>& v) {
  return v ? std::to_string(*v) : std::string();
}

std::vector<csv::Row> parse_csv_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  return csv::parse(is);
}

constexpr std::string_view kManifestHeader = "#punct-manifest,v=1";
constexpr std::string_view kFeaturesHeader = "#punct-features,v=1";
constexpr std::string_view kClassModelHeader = "#punct-classmodel,v=1";
constexpr std::string_view kNetHeader = "#punct-net,v=1";
constexpr char kFeaturesBinaryMagic[8] = {'P', 'F', 'B', '1', 0, 0, 0, 0};

const std::vector<std::string> kMetadataColumns = {
    "doc_id", "title",      "author",    "language",
    "birth_year", "death_year", "bookshelf", "pub_date"};

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << is.rdbuf();
  if (!is.good() && !is.eof()) throw std::runtime_error("cannot read " + path.string());
  return std::move(buf).str();
}

void atomic_write(const std::filesystem::path& path, std::string_view content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot create " + tmp.string());
    os.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!os.good()) throw std::runtime_error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::vector<DocumentMeta> read_metadata(const std::filesystem::path& path) {
  const auto rows = parse_csv_file(path);
  if (rows.empty()) throw std::runtime_error(path.string() + ": empty metadata file");
  if (rows.front() != kMetadataColumns) {
    throw std::runtime_error(path.string() +
                             ": metadata header must be doc_id,title,author,language,"
                             "birth_year,death_year,bookshelf,pub_date");
  }
  std::vector<DocumentMeta> metadata;
  std::set<std::string> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const csv::Row& row = rows[r];
    if (row.size() != kMetadataColumns.size()) {
      throw std::runtime_error(path.string() + ": row " + std::to_string(r + 1) +
                               " has " + std::to_string(row.size()) + " fields");
    }
    DocumentMeta m;
    m.doc_id = row[0];
    m.title = row[1];
    m.author = row[2];
    m.language = row[3];
    m.birth_year = parse_opt_int(row[4]);
    m.death_year = parse_opt_int(row[5]);
    m.bookshelf = row[6];
    m.pub_date = parse_opt_int(row[7]);
    if (m.doc_id.empty()) {
      throw std::runtime_error(path.string() + ": row " + std::to_string(r + 1) +
                               " has an empty doc_id");
    }
    if (!seen.insert(m.doc_id).second) {
      throw std::runtime_error(path.string() + ": duplicate doc_id " + m.doc_id);
    }
    if (m.birth_year && m.death_year && *m.birth_year > *m.death_year) {
      throw std::runtime_error(path.string() + ": doc_id " + m.doc_id +
                               " has birth_year after death_year");
    }
    metadata.push_back(std::move(m));
  }
  return metadata;
}

void write_manifest(const CorpusManifest& manifest, const std::filesystem::path& path) {
  std::ostringstream os;
  os << kManifestHeader << '\n';
  csv::write_row(os, {"doc_id", "title", "author", "language", "birth_year",
                      "death_year", "bookshelf", "pub_date", "retained",
                      "removal_rule"});
  for (const ManifestEntry& e : manifest.documents) {
    csv::write_row(os, {e.meta.doc_id, e.meta.title, e.meta.author, e.meta.language,
                        opt_to_string(e.meta.birth_year), opt_to_string(e.meta.death_year),
                        e.meta.bookshelf, opt_to_string(e.meta.pub_date),
                        e.retained ? "1" : "0", e.removal_rule});
  }
  atomic_write(path, os.str());
}

CorpusManifest read_manifest(const std::filesystem::path& path) {
  const auto rows = parse_csv_file(path);
  if (rows.size() < 2 || rows[0].empty() || rows[0][0] != "#punct-manifest") {
    throw std::runtime_error(path.string() + ": not a manifest file");
  }
  CorpusManifest manifest;
  std::map<std::string, int> counts;
  for (std::size_t r = 2; r < rows.size(); ++r) {
    const csv::Row& row = rows[r];
    if (row.size() != 10) {
      throw std::runtime_error(path.string() + ": manifest row " +
                               std::to_string(r + 1) + " has " +
                               std::to_string(row.size()) + " fields");
    }
    ManifestEntry e;
    e.meta.doc_id = row[0];
    e.meta.title = row[1];
    e.meta.author = row[2];
    e.meta.language = row[3];
    e.meta.birth_year = parse_opt_int(row[4]);
    e.meta.death_year = parse_opt_int(row[5]);
    e.meta.bookshelf = row[6];
    e.meta.pub_date = parse_opt_int(row[7]);
    e.retained = row[8] == "1";
    e.removal_rule = row[9];
    if (!e.retained) ++counts[e.removal_rule];
    manifest.documents.push_back(std::move(e));
  }
  // Fixed rule order first, then any further rules (e.g. genre_filter).
  for (const char* rule : {rules::kLanguage, rules::kAuthorLabel, rules::kDuplicateTitle,
                           rules::kCompleteTitle, rules::kNoQuotes, rules::kUnreadable,
                           rules::kAuthorMinDocs}) {
    manifest.cleaning_report.emplace_back(rule, counts[rule]);
    counts.erase(rule);
  }
  for (const auto& [rule, n] : counts) manifest.cleaning_report.emplace_back(rule, n);
  return manifest;
}

void write_cleaning_report(const CorpusManifest& manifest, const std::filesystem::path& path) {
  std::ostringstream os;
  csv::write_row(os, {"rule", "count"});
  for (const auto& [rule, n] : manifest.cleaning_report) {
    csv::write_row(os, {rule, std::to_string(n)});
  }
  csv::write_row(os, {"no_header_sentinels", std::to_string(manifest.flagged_no_sentinels)});
  atomic_write(path, os.str());
}

namespace {

// Shared record layout of both feature-store forms.
std::vector<double> feature_record(const FeatureSet& fs) {
  std::vector<double> rec;
  rec.reserve(211 + fs.f4.size() + fs.f5.size());
  rec.insert(rec.end(), fs.f1.begin(), fs.f1.end());
  rec.insert(rec.end(), fs.f3.begin(), fs.f3.end());
  rec.insert(rec.end(), fs.f4.begin(), fs.f4.end());
  rec.insert(rec.end(), fs.f5.begin(), fs.f5.end());
  rec.insert(rec.end(), fs.f6.begin(), fs.f6.end());
  rec.push_back(fs.rate);
  return rec;
}

FeatureSet feature_from_record(std::string doc_id, std::span<const double> rec,
                               const FeatureConfig& cfg) {
  const std::size_t f4_len = static_cast<std::size_t>(cfg.sentence_cap) + 1;
  const std::size_t f5_len = static_cast<std::size_t>(cfg.gap_cap) + 1;
  if (rec.size() != 10 + 100 + f4_len + f5_len + 100 + 1) {
    throw std::runtime_error("feature record for " + doc_id + " has wrong length");
  }
  FeatureSet fs;
  fs.doc_id = std::move(doc_id);
  std::size_t at = 0;
  for (std::size_t i = 0; i < 10; ++i) fs.f1[i] = rec[at++];
  fs.f3.assign(rec.begin() + at, rec.begin() + at + 100);
  at += 100;
  fs.f4.assign(rec.begin() + at, rec.begin() + at + f4_len);
  at += f4_len;
  fs.f5.assign(rec.begin() + at, rec.begin() + at + f5_len);
  at += f5_len;
  fs.f6.assign(rec.begin() + at, rec.begin() + at + 100);
  at += 100;
  fs.rate = rec[at];

  // The matrices and f2 are derived, not stored.
  fs.Pt = unflatten(fs.f3);
  fs.W = unflatten(fs.f6);
  for (int i = 0; i < kMarkCount; ++i) {
    bool defined = false;
    for (int j = 0; j < kMarkCount; ++j) defined = defined || fs.Pt[i][j] > 0.0;
    fs.row_defined[static_cast<std::size_t>(i)] = defined;
    if (!defined) continue;
    for (int j = 0; j < kMarkCount; ++j) {
      fs.P[i][j] = fs.f1[static_cast<std::size_t>(i)] > 0.0
                       ? fs.Pt[i][j] / fs.f1[static_cast<std::size_t>(i)]
                       : 0.0;
    }
  }
  fs.f2 = flatten(fs.P);
  return fs;
}

FeatureConfig parse_features_header(const csv::Row& row, const std::string& where) {
  // #punct-features,v=1,gap_cap=<n>,sentence_cap=<n>
  if (row.size() != 4 || row[0] != "#punct-features" || row[1] != "v=1" ||
      row[2].rfind("gap_cap=", 0) != 0 || row[3].rfind("sentence_cap=", 0) != 0) {
    throw std::runtime_error(where + ": not a v1 feature store");
  }
  FeatureConfig cfg;
  cfg.gap_cap = parse_int(std::string_view(row[2]).substr(8));
  cfg.sentence_cap = parse_int(std::string_view(row[3]).substr(13));
  return cfg;
}

}  // namespace

void write_features_csv(const std::vector<FeatureSet>& sets, const FeatureConfig& cfg,
                        const std::filesystem::path& path) {
  std::ostringstream os;
  os << kFeaturesHeader << ",gap_cap=" << cfg.gap_cap
     << ",sentence_cap=" << cfg.sentence_cap << '\n';
  for (const FeatureSet& fs : sets) {
    csv::Row row;
    row.push_back(fs.doc_id);
    for (double v : feature_record(fs)) row.push_back(format_double(v));
    csv::write_row(os, row);
  }
  atomic_write(path, os.str());
}

std::pair<std::vector<FeatureSet>, FeatureConfig> read_features_csv(
    const std::filesystem::path& path) {
  const auto rows = parse_csv_file(path);
  if (rows.empty()) throw std::runtime_error(path.string() + ": empty feature store");
  const FeatureConfig cfg = parse_features_header(rows.front(), path.string());
  std::vector<FeatureSet> sets;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const csv::Row& row = rows[r];
    if (row.empty()) continue;
    std::vector<double> rec;
    rec.reserve(row.size() - 1);
    for (std::size_t i = 1; i < row.size(); ++i) rec.push_back(parse_double(row[i]));
    sets.push_back(feature_from_record(row[0], rec, cfg));
  }
  return {std::move(sets), cfg};
}

void write_features_binary(const std::vector<FeatureSet>& sets, const FeatureConfig& cfg,
                           const std::filesystem::path& path) {
  std::ostringstream os;
  os.write(kFeaturesBinaryMagic, sizeof kFeaturesBinaryMagic);
  const auto put_u32 = [&os](std::uint32_t v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
  };
  const auto put_u64 = [&os](std::uint64_t v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
  };
  put_u32(static_cast<std::uint32_t>(cfg.gap_cap));
  put_u32(static_cast<std::uint32_t>(cfg.sentence_cap));
  put_u64(sets.size());
  for (const FeatureSet& fs : sets) {
    put_u32(static_cast<std::uint32_t>(fs.doc_id.size()));
    os.write(fs.doc_id.data(), static_cast<std::streamsize>(fs.doc_id.size()));
    const std::vector<double> rec = feature_record(fs);
    os.write(reinterpret_cast<const char*>(rec.data()),
             static_cast<std::streamsize>(rec.size() * sizeof(double)));
  }
  atomic_write(path, os.str());
}

std::pair<std::vector<FeatureSet>, FeatureConfig> read_features_binary(
    const std::filesystem::path& path) {
  const std::string blob = read_file(path);
  std::size_t at = 0;
  const auto need = [&](std::size_t n) {
    if (at + n > blob.size()) throw std::runtime_error(path.string() + ": truncated");
  };
  need(sizeof kFeaturesBinaryMagic);
  if (std::memcmp(blob.data(), kFeaturesBinaryMagic, sizeof kFeaturesBinaryMagic) != 0) {
    throw std::runtime_error(path.string() + ": not a v1 binary feature store");
  }
  at += sizeof kFeaturesBinaryMagic;
  const auto get_u32 = [&]() {
    need(4);
    std::uint32_t v;
    std::memcpy(&v, blob.data() + at, 4);
    at += 4;
    return v;
  };
  const auto get_u64 = [&]() {
    need(8);
    std::uint64_t v;
    std::memcpy(&v, blob.data() + at, 8);
    at += 8;
    return v;
  };
  FeatureConfig cfg;
  cfg.gap_cap = static_cast<int>(get_u32());
  cfg.sentence_cap = static_cast<int>(get_u32());
  const std::uint64_t count = get_u64();
  const std::size_t rec_len = 10 + 100 + static_cast<std::size_t>(cfg.sentence_cap) + 1 +
                              static_cast<std::size_t>(cfg.gap_cap) + 1 + 100 + 1;
  std::vector<FeatureSet> sets;
  for (std::uint64_t k = 0; k < count; ++k) {
    const std::uint32_t id_len = get_u32();
    need(id_len);
    std::string doc_id(blob.data() + at, id_len);
    at += id_len;
    need(rec_len * sizeof(double));
    std::vector<double> rec(rec_len);
    std::memcpy(rec.data(), blob.data() + at, rec_len * sizeof(double));
    at += rec_len * sizeof(double);
    sets.push_back(feature_from_record(std::move(doc_id), rec, cfg));
  }
  return {std::move(sets), cfg};
}

void write_tokens(const std::vector<TokenizedDoc>& docs, const std::filesystem::path& path) {
  std::ostringstream os;
  for (const TokenizedDoc& doc : docs) {
    if (doc.doc_id.find_first_of("\t\n\r") != std::string::npos) {
      throw std::runtime_error("doc_id unusable in token records: " + doc.doc_id);
    }
    os << doc.doc_id << '\t';
    for (Mark m : doc.seq) os << mark_code(m);
    os << '\t';
    for (std::size_t i = 0; i < doc.gaps.size(); ++i) {
      if (i > 0) os << ',';
      os << doc.gaps[i];
    }
    os << '\n';
  }
  atomic_write(path, os.str());
}

std::vector<TokenizedDoc> read_tokens(const std::filesystem::path& path) {
  std::istringstream is(read_file(path));
  std::vector<TokenizedDoc> docs;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const std::size_t t1 = line.find('\t');
    const std::size_t t2 = line.find('\t', t1 == std::string::npos ? t1 : t1 + 1);
    if (t1 == std::string::npos || t2 == std::string::npos) {
      throw std::runtime_error(path.string() + ": malformed token record");
    }
    TokenizedDoc doc;
    doc.doc_id = line.substr(0, t1);
    for (std::size_t i = t1 + 1; i < t2; ++i) {
      const auto m = mark_from_code(line[i]);
      if (!m) throw std::runtime_error(path.string() + ": bad mark code");
      doc.seq.push_back(*m);
    }
    std::string_view rest = std::string_view(line).substr(t2 + 1);
    while (!rest.empty()) {
      const std::size_t comma = rest.find(',');
      doc.gaps.push_back(parse_int(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (doc.seq.size() != doc.gaps.size()) {
      throw std::runtime_error(path.string() + ": token record length mismatch for " +
                               doc.doc_id);
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

void save_class_model(const ClassModel& model, const std::filesystem::path& path) {
  if (model.class_ids.size() != model.profiles.size()) {
    throw std::runtime_error("save_class_model: class/profile count mismatch");
  }
  std::ostringstream os;
  os << kClassModelHeader << '\n';
  const std::size_t f3_len = model.profiles.empty() ? 100 : model.profiles[0].f3.size();
  const std::size_t f4_len = model.profiles.empty() ? 201 : model.profiles[0].f4.size();
  const std::size_t f5_len = model.profiles.empty() ? 41 : model.profiles[0].f5.size();
  csv::write_row(os, {std::to_string(model.class_ids.size()), std::to_string(f3_len),
                      std::to_string(f4_len), std::to_string(f5_len)});
  for (std::size_t c = 0; c < model.class_ids.size(); ++c) {
    csv::write_row(os, {model.class_ids[c]});
    const ClassModel::Profile& p = model.profiles[c];
    const auto dump = [&os](const char* tag, std::span<const double> v) {
      csv::Row row{tag};
      for (double x : v) row.push_back(format_double(x));
      csv::write_row(os, row);
    };
    dump("f1", {p.f1.data(), p.f1.size()});
    dump("f3", p.f3);
    dump("f4", p.f4);
    dump("f5", p.f5);
  }
  atomic_write(path, os.str());
}

ClassModel load_class_model(const std::filesystem::path& path) {
  const auto rows = parse_csv_file(path);
  if (rows.size() < 2 || rows[0].empty() || rows[0][0] != "#punct-classmodel") {
    throw std::runtime_error(path.string() + ": not a class model file");
  }
  if (rows[1].size() != 4) throw std::runtime_error(path.string() + ": bad model header");
  const auto n_classes = static_cast<std::size_t>(parse_long(rows[1][0]));
  const auto f3_len = static_cast<std::size_t>(parse_long(rows[1][1]));
  const auto f4_len = static_cast<std::size_t>(parse_long(rows[1][2]));
  const auto f5_len = static_cast<std::size_t>(parse_long(rows[1][3]));

  ClassModel model;
  std::size_t r = 2;
  const auto take = [&](const char* tag, std::size_t want) {
    if (r >= rows.size() || rows[r].size() != want + 1 || rows[r][0] != tag) {
      throw std::runtime_error(path.string() + ": malformed " + tag + " row");
    }
    std::vector<double> v(want);
    for (std::size_t i = 0; i < want; ++i) v[i] = parse_double(rows[r][i + 1]);
    ++r;
    return v;
  };
  for (std::size_t c = 0; c < n_classes; ++c) {
    if (r >= rows.size() || rows[r].size() != 1) {
      throw std::runtime_error(path.string() + ": expected a class id row");
    }
    model.class_ids.push_back(rows[r][0]);
    ++r;
    ClassModel::Profile p;
    const auto f1 = take("f1", 10);
    std::copy(f1.begin(), f1.end(), p.f1.begin());
    p.f3 = take("f3", f3_len);
    p.f4 = take("f4", f4_len);
    p.f5 = take("f5", f5_len);
    model.profiles.push_back(std::move(p));
  }
  return model;
}

void save_net(const TrainedNet& net, const std::filesystem::path& path) {
  std::ostringstream os;
  os << kNetHeader << '\n';
  csv::write_row(os, {std::to_string(net.input_dim), std::to_string(net.W1.rows()),
                      std::to_string(net.class_ids.size()),
                      net.activation == Activation::Relu ? "relu" : "tanh",
                      format_double(net.final_epoch_loss)});
  csv::write_row(os, net.class_ids);
  const auto dump_matrix = [&os](const Eigen::MatrixXd& M) {
    for (Eigen::Index r = 0; r < M.rows(); ++r) {
      csv::Row row;
      row.reserve(static_cast<std::size_t>(M.cols()));
      for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(format_double(M(r, c)));
      csv::write_row(os, row);
    }
  };
  dump_matrix(net.W1);
  dump_matrix(net.b1.transpose());
  dump_matrix(net.W2);
  dump_matrix(net.b2.transpose());
  atomic_write(path, os.str());
}

TrainedNet load_net(const std::filesystem::path& path) {
  const auto rows = parse_csv_file(path);
  if (rows.size() < 3 || rows[0].empty() || rows[0][0] != "#punct-net") {
    throw std::runtime_error(path.string() + ": not a net model file");
  }
  if (rows[1].size() != 5) throw std::runtime_error(path.string() + ": bad net header");
  TrainedNet net;
  net.input_dim = parse_int(rows[1][0]);
  const auto hidden = static_cast<Eigen::Index>(parse_long(rows[1][1]));
  const auto n_classes = static_cast<std::size_t>(parse_long(rows[1][2]));
  if (rows[1][3] == "relu") {
    net.activation = Activation::Relu;
  } else if (rows[1][3] == "tanh") {
    net.activation = Activation::Tanh;
  } else {
    throw std::runtime_error(path.string() + ": unknown activation " + rows[1][3]);
  }
  net.final_epoch_loss = parse_double(rows[1][4]);
  net.class_ids = rows[2];
  if (net.class_ids.size() != n_classes) {
    throw std::runtime_error(path.string() + ": class id count mismatch");
  }

  std::size_t r = 3;
  const auto load_matrix = [&](Eigen::Index nr, Eigen::Index nc) {
    Eigen::MatrixXd M(nr, nc);
    for (Eigen::Index i = 0; i < nr; ++i, ++r) {
      if (r >= rows.size() || rows[r].size() != static_cast<std::size_t>(nc)) {
        throw std::runtime_error(path.string() + ": truncated weight matrix");
      }
      for (Eigen::Index c = 0; c < nc; ++c) {
        M(i, c) = parse_double(rows[r][static_cast<std::size_t>(c)]);
      }
    }
    return M;
  };
  net.W1 = load_matrix(hidden, net.input_dim);
  net.b1 = load_matrix(1, hidden).transpose();
  net.W2 = load_matrix(static_cast<Eigen::Index>(n_classes), hidden);
  net.b2 = load_matrix(1, static_cast<Eigen::Index>(n_classes)).transpose();
  return net;
}

}  // namespace punct::io
