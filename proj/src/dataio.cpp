#include "hdgc/dataio.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hdgc/errors.hpp"

namespace hdgc {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  fields.push_back(cur);
  return fields;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t");
  size_t e = s.find_last_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

MultiChannelSeries read_series_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");

  std::string line;
  if (!std::getline(in, line)) throw FormatError(path.string() + ": empty file");
  std::vector<std::string> header = split_csv_line(line);
  for (auto& h : header) h = trim(h);
  const size_t n = header.size();
  if (n == 0 || header[0].empty())
    throw FormatError(path.string() + ": header row has no labels");

  std::vector<std::vector<double>> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != n)
      throw FormatError(path.string() + ": row " + std::to_string(lineno) + " has " +
                        std::to_string(fields.size()) + " fields, expected " + std::to_string(n));
    std::vector<double> vals(n);
    for (size_t c = 0; c < n; ++c) {
      const std::string f = trim(fields[c]);
      double v = 0.0;
      const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
      if (res.ec != std::errc() || res.ptr != f.data() + f.size())
        throw FormatError(path.string() + ": row " + std::to_string(lineno) + ", column '" +
                          header[c] + "': cannot parse '" + f + "'");
      if (!std::isfinite(v))
        throw FormatError(path.string() + ": row " + std::to_string(lineno) + ", column '" +
                          header[c] + "': non-finite value");
      vals[c] = v;
    }
    rows.push_back(std::move(vals));
  }

  MultiChannelSeries series;
  series.labels = header;
  series.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(n));
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t c = 0; c < n; ++c)
      series.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  try {
    series.validate();
  } catch (const InvalidInputError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return series;
}

void write_series_csv(const std::filesystem::path& path, const MultiChannelSeries& series) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  for (size_t c = 0; c < series.labels.size(); ++c) {
    if (c) out << ',';
    out << series.labels[c];
  }
  out << '\n';
  for (Eigen::Index t = 0; t < series.values.rows(); ++t) {
    for (Eigen::Index c = 0; c < series.values.cols(); ++c) {
      if (c) out << ',';
      out << format_number(series.values(t, c));
    }
    out << '\n';
  }
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

AugmentationSpec AugmentationSpec::from_json(const nlohmann::json& j) {
  AugmentationSpec spec;
  if (j.contains("differences"))
    for (const auto& d : j.at("differences"))
      spec.pair_differences.emplace_back(d.at(0).get<std::string>(), d.at(1).get<std::string>());
  if (j.contains("averages"))
    for (const auto& a : j.at("averages"))
      spec.regional_averages.push_back(
          {a.at("label").get<std::string>(), a.at("channels").get<std::vector<std::string>>()});
  if (j.contains("laplacians"))
    for (const auto& l : j.at("laplacians"))
      spec.laplacians.push_back(
          {l.at("center").get<std::string>(), l.at("neighbors").get<std::vector<std::string>>()});
  if (j.contains("products"))
    for (const auto& p : j.at("products"))
      spec.products.emplace_back(p.at(0).get<std::string>(), p.at(1).get<std::string>());
  return spec;
}

MultiChannelSeries augment_channels(const MultiChannelSeries& series, const AugmentationSpec& spec) {
  series.validate();
  auto col = [&](const std::string& label) -> Eigen::VectorXd {
    const int idx = series.index_of(label);
    if (idx < 0) throw InvalidInputError("augment: channel '" + label + "' not found");
    return series.values.col(idx);
  };

  std::vector<std::pair<std::string, Eigen::VectorXd>> added;
  for (const auto& [a, b] : spec.pair_differences)
    added.emplace_back(a + "-" + b, col(a) - col(b));
  for (const auto& avg : spec.regional_averages) {
    if (avg.channels.empty())
      throw InvalidInputError("augment: average '" + avg.label + "' has no channels");
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(series.t_len());
    for (const auto& ch : avg.channels) acc += col(ch);
    added.emplace_back(avg.label, acc / static_cast<double>(avg.channels.size()));
  }
  for (const auto& lap : spec.laplacians) {
    if (lap.neighbors.empty())
      throw InvalidInputError("augment: laplacian '" + lap.center + "' has no neighbors");
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(series.t_len());
    for (const auto& ch : lap.neighbors) acc += col(ch);
    added.emplace_back(lap.center + ".lap",
                       col(lap.center) - acc / static_cast<double>(lap.neighbors.size()));
  }
  for (const auto& [a, b] : spec.products)
    added.emplace_back(a + "*" + b, col(a).cwiseProduct(col(b)));

  MultiChannelSeries out = series;
  out.values.conservativeResize(Eigen::NoChange, series.n_channels() + static_cast<Eigen::Index>(added.size()));
  Eigen::Index c = series.n_channels();
  for (auto& [label, values] : added) {
    if (out.index_of(label) >= 0)
      throw InvalidInputError("augment: derived label '" + label + "' collides");
    out.labels.push_back(label);
    out.values.col(c++) = values;
  }
  return out;
}

void write_adjacency_csv(const std::filesystem::path& path, const std::vector<std::string>& labels,
                         const Eigen::MatrixXi& adjacency) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  for (const auto& l : labels) out << ',' << l;
  out << '\n';
  for (Eigen::Index i = 0; i < adjacency.rows(); ++i) {
    out << labels[static_cast<size_t>(i)];
    for (Eigen::Index j = 0; j < adjacency.cols(); ++j) {
      out << ',';
      if (i != j) out << adjacency(i, j);
    }
    out << '\n';
  }
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

Eigen::MatrixXi read_adjacency_csv(const std::filesystem::path& path,
                                   std::vector<std::string>* labels_out) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path.string() + ": empty file");
  std::vector<std::string> header = split_csv_line(line);
  if (header.size() < 2) throw FormatError(path.string() + ": malformed adjacency header");
  std::vector<std::string> labels(header.begin() + 1, header.end());
  for (auto& l : labels) l = trim(l);
  const size_t m = labels.size();

  Eigen::MatrixXi adj = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  size_t row = 0;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (row >= m) throw FormatError(path.string() + ": too many rows");
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != m + 1)
      throw FormatError(path.string() + ": row " + std::to_string(lineno) + " has " +
                        std::to_string(fields.size()) + " fields, expected " + std::to_string(m + 1));
    for (size_t c = 0; c < m; ++c) {
      const std::string f = trim(fields[c + 1]);
      if (f.empty()) continue;  // diagonal
      if (f != "0" && f != "1")
        throw FormatError(path.string() + ": row " + std::to_string(lineno) +
                          ": adjacency cells must be 0, 1 or empty");
      adj(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(c)) = f == "1" ? 1 : 0;
    }
    ++row;
  }
  if (row != m) throw FormatError(path.string() + ": expected " + std::to_string(m) + " rows");
  if (labels_out) *labels_out = labels;
  return adj;
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace

void write_report(const std::filesystem::path& dir, const ConnectivityMatrix& results,
                  const nlohmann::json& metadata, const Eigen::VectorXd& explained_variance) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir.string() + "'");

  nlohmann::json report;
  report["schema_version"] = 1;
  report["config"] = metadata;
  report["alpha"] = results.alpha;
  report["labels"] = results.labels;
  std::vector<double> ev(explained_variance.data(), explained_variance.data() + explained_variance.size());
  report["explained_variance"] = ev;
  nlohmann::json tests = nlohmann::json::array();
  for (const auto& r : results.entries) {
    tests.push_back({{"cause", r.cause},
                     {"effect", r.effect},
                     {"f_stat", r.f_stat},
                     {"df1", r.df1},
                     {"df2", r.df2},
                     {"p_value", r.p_value},
                     {"reject", r.reject},
                     {"p_lags", r.p_lags},
                     {"q_lags", r.q_lags}});
  }
  report["tests"] = tests;

  {
    std::ofstream out(dir / "report.json");
    if (!out) throw IoError("cannot open report.json for writing");
    out << report.dump(2) << '\n';
    if (!out) throw IoError("failed writing report.json");
  }

  write_adjacency_csv(dir / "adjacency.csv", results.labels, results.adjacency());

  {
    std::ofstream out(dir / "graph.dot");
    if (!out) throw IoError("cannot open graph.dot for writing");
    out << "digraph connectivity {\n";
    for (const auto& l : results.labels) out << "  \"" << dot_escape(l) << "\";\n";
    for (const auto& r : results.entries)
      if (r.reject)
        out << "  \"" << dot_escape(r.cause) << "\" -> \"" << dot_escape(r.effect) << "\";\n";
    out << "}\n";
    if (!out) throw IoError("failed writing graph.dot");
  }
}

void write_truth_json(const std::filesystem::path& path, const GroundTruth& truth,
                      const nlohmann::json& config_echo) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["labels"] = truth.labels;
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [cause, effect] : truth.edges) edges.push_back({cause, effect});
  j["edges"] = edges;
  j["influencer_map"] = truth.influencer_map;
  j["influence_weights"] = truth.influence_weights;
  j["config"] = config_echo;

  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << j.dump(2) << '\n';
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

GroundTruth read_truth_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  GroundTruth truth;
  try {
    truth.labels = j.at("labels").get<std::vector<std::string>>();
    for (const auto& e : j.at("edges"))
      truth.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    if (j.contains("influencer_map"))
      truth.influencer_map = j.at("influencer_map").get<std::vector<std::vector<int>>>();
    if (j.contains("influence_weights"))
      truth.influence_weights = j.at("influence_weights").get<std::vector<std::vector<double>>>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return truth;
}

nlohmann::json network_config_to_json(const NetworkConfig& cfg) {
  nlohmann::json j;
  j["n_coi"] = cfg.n_coi;
  j["n_external"] = cfg.n_external;
  j["T"] = cfg.T;
  j["scheme"] = scheme_name(cfg.scheme);
  j["n_influencers"] = cfg.n_influencers;
  j["influence_weight"] = cfg.influence_weight;
  j["interaction_scale"] = cfg.interaction_scale;
  j["mu"] = cfg.mu;
  j["effect_coeffs"] = {cfg.effect_coeffs[0], cfg.effect_coeffs[1]};
  j["sigma_eps"] = cfg.sigma_eps;
  j["sigma_xi"] = cfg.sigma_xi;
  j["sigma_nu"] = cfg.sigma_nu;
  nlohmann::json bands = nlohmann::json::array();
  for (const auto& b : cfg.bands)
    bands.push_back({{"name", b.name}, {"r", b.r}, {"rho", b.rho}, {"sigma", b.sigma}});
  j["bands"] = bands;
  if (!cfg.band_weights.empty()) j["band_weights"] = cfg.band_weights;
  j["weight_jitter"] = {cfg.weight_jitter_lo, cfg.weight_jitter_hi};
  j["shared_influencers"] = cfg.shared_influencers;
  if (!cfg.connected_subset.empty()) j["connected_subset"] = cfg.connected_subset;
  j["seed"] = cfg.seed;
  return j;
}

NetworkConfig network_config_from_json(const nlohmann::json& j) {
  NetworkConfig cfg;
  try {
    if (j.contains("n_coi")) cfg.n_coi = j.at("n_coi").get<int>();
    if (j.contains("n_external")) cfg.n_external = j.at("n_external").get<int>();
    if (j.contains("T")) cfg.T = j.at("T").get<int>();
    if (j.contains("scheme")) cfg.scheme = scheme_from_name(j.at("scheme").get<std::string>());
    if (j.contains("n_influencers")) cfg.n_influencers = j.at("n_influencers").get<int>();
    if (j.contains("influence_weight")) cfg.influence_weight = j.at("influence_weight").get<double>();
    if (j.contains("interaction_scale"))
      cfg.interaction_scale = j.at("interaction_scale").get<double>();
    if (j.contains("mu")) cfg.mu = j.at("mu").get<double>();
    if (j.contains("effect_coeffs")) {
      cfg.effect_coeffs[0] = j.at("effect_coeffs").at(0).get<double>();
      cfg.effect_coeffs[1] = j.at("effect_coeffs").at(1).get<double>();
    }
    if (j.contains("sigma_eps")) cfg.sigma_eps = j.at("sigma_eps").get<double>();
    if (j.contains("sigma_xi")) cfg.sigma_xi = j.at("sigma_xi").get<double>();
    if (j.contains("sigma_nu")) cfg.sigma_nu = j.at("sigma_nu").get<double>();
    if (j.contains("bands")) {
      cfg.bands.clear();
      for (const auto& b : j.at("bands"))
        cfg.bands.push_back({b.at("name").get<std::string>(), b.at("r").get<double>(),
                             b.at("rho").get<double>(), b.at("sigma").get<double>()});
    }
    if (j.contains("band_weights"))
      cfg.band_weights = j.at("band_weights").get<std::vector<double>>();
    if (j.contains("weight_jitter")) {
      cfg.weight_jitter_lo = j.at("weight_jitter").at(0).get<double>();
      cfg.weight_jitter_hi = j.at("weight_jitter").at(1).get<double>();
    }
    if (j.contains("shared_influencers"))
      cfg.shared_influencers = j.at("shared_influencers").get<bool>();
    if (j.contains("connected_subset"))
      cfg.connected_subset = j.at("connected_subset").get<std::vector<int>>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("network config: ") + e.what());
  }
  return cfg;
}

}  // namespace hdgc
