#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "genhankel/error.hpp"
#include "genhankel/laws.hpp"
#include "genhankel/limits.hpp"
#include "genhankel/matrix.hpp"
#include "genhankel/spectra.hpp"

namespace genhankel::cli {

using nlohmann::json;

namespace {

const std::set<std::string> kCommands{"simulate", "moments", "wordlimit", "compare", "words"};

struct Artifact {
  std::string tag;  // empty for the primary output
  std::string body;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

double parse_number(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse " + what + " '" + s + "'");
  }
  if (used != s.size()) throw std::invalid_argument("cannot parse " + what + " '" + s + "'");
  return v;
}

// "a,b,c" or "lo:step:hi" (inclusive, tolerant to rounding at the top).
std::vector<double> parse_theta_grid(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw std::invalid_argument("theta grid range must be lo:step:hi");
    const double lo = parse_number(parts[0], "theta grid");
    const double step = parse_number(parts[1], "theta grid");
    const double hi = parse_number(parts[2], "theta grid");
    if (!(step > 0.0) || hi < lo) throw std::invalid_argument("theta grid range must have step > 0 and hi >= lo");
    const auto count = static_cast<std::int64_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    if (count > 100000) throw std::invalid_argument("theta grid has too many points");
    for (std::int64_t i = 0; i < count; ++i) out.push_back(lo + static_cast<double>(i) * step);
  } else {
    for (const auto& p : split(text, ',')) out.push_back(parse_number(p, "theta grid"));
  }
  if (out.empty()) throw std::invalid_argument("theta grid is empty");
  return out;
}

std::pair<double, double> parse_range(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw std::invalid_argument("--range expects lo,hi");
  return {parse_number(parts[0], "range"), parse_number(parts[1], "range")};
}

std::vector<std::string> default_methods(const std::string& command) {
  if (command == "moments") return {"ensemble", "mixed", "closed-form"};
  if (command == "wordlimit") return {"mc", "catalan"};
  return {};
}

std::set<std::string> allowed_methods(const std::string& command) {
  if (command == "moments") return {"ensemble", "mc", "mixed", "closed-form"};
  if (command == "wordlimit") return {"mc", "catalan", "finite-n", "closed-form"};
  return {};
}

bool has_method(const RunConfig& cfg, const std::string& m) {
  return std::find(cfg.methods.begin(), cfg.methods.end(), m) != cfg.methods.end();
}

std::string theta_tag(double theta) { return "theta" + format_double(theta); }

RunConfig single_theta(const RunConfig& cfg, double theta) {
  RunConfig one = cfg;
  one.thetas = {theta};
  one.grid = false;
  return one;
}

std::string csv_header(const RunConfig& cfg, const std::vector<std::string>& notes = {}) {
  std::string h = "# genhankel " + cfg.command + "\n# config: " + config_to_json(cfg) + "\n";
  for (const auto& n : notes) h += "# " + n + "\n";
  return h;
}

std::string csv_bool(bool b) { return b ? "true" : "false"; }

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    os << content;
    os.flush();
    if (!os) throw std::runtime_error("write to '" + tmp.string() + "' failed");
  }
  fs::rename(tmp, target);
}

// ---------------------------------------------------------------- simulate

std::vector<Artifact> simulate(const RunConfig& cfg, double theta) {
  const RunConfig one = single_theta(cfg, theta);
  EnsembleConfig ec;
  ec.link = LinkSpec::theta_link(theta);
  ec.n = cfg.n;
  ec.reps = cfg.reps;
  ec.dist = parse_distribution(cfg.dist);
  ec.seed = cfg.seed;
  ec.max_order = 2 * cfg.kmax;
  const auto spectra = ensemble_spectra(ec);
  const auto moments = moments_from_spectra(spectra, ec.max_order);

  std::vector<double> zero_props;
  std::vector<double> pooled;
  std::int64_t dropped = 0;
  double m = 0.0;
  for (const auto& eigs : spectra) {
    const double tol = cfg.zero_tol.value_or(default_zero_tol(eigs));
    zero_props.push_back(zero_proportion(eigs, tol));
    for (double x : eigs) {
      m = std::max(m, std::abs(x));
      if (cfg.exclude_zero && std::abs(x) <= tol) {
        ++dropped;
      } else {
        pooled.push_back(x);
      }
    }
  }
  if (m == 0.0) m = 1.0;
  const auto [lo, hi] = cfg.range.value_or(std::pair{-m, m});
  auto hist = histogram(pooled, cfg.bins, lo, hi);
  hist.dropped = dropped;

  double zp_mean = 0.0;
  for (double z : zero_props) zp_mean += z;
  zp_mean /= static_cast<double>(zero_props.size());
  double zp_ss = 0.0;
  for (double z : zero_props) zp_ss += (z - zp_mean) * (z - zp_mean);
  const double r = static_cast<double>(zero_props.size());
  const double zp_se = zero_props.size() > 1 ? std::sqrt(zp_ss / (r - 1.0) / r) : 0.0;
  const double zp_ref = std::max(0.0, 1.0 - 1.0 / theta);
  const std::string tol_rule = cfg.zero_tol ? format_double(*cfg.zero_tol) : "1e-6*(1+max|lambda|)";

  std::vector<Artifact> out;
  if (cfg.format == "json") {
    json j;
    j["config"] = json::parse(config_to_json(one));
    json h;
    h["bin_left"] = json::array();
    h["bin_right"] = json::array();
    h["count"] = json::array();
    for (std::size_t b = 0; b < hist.counts.size(); ++b) {
      h["bin_left"].push_back(hist.bin_left(b));
      h["bin_right"].push_back(hist.bin_right(b));
      h["count"].push_back(hist.counts[b]);
    }
    h["underflow"] = hist.underflow;
    h["overflow"] = hist.overflow;
    h["dropped"] = hist.dropped;
    j["histogram"] = h;
    j["moments"] = json::array();
    for (std::size_t i = 0; i < moments.mean.size(); ++i)
      j["moments"].push_back({{"h", i + 1}, {"value", moments.mean[i]}, {"std_error", moments.std_error[i]}});
    j["zero_proportion"] = {{"mean", zp_mean},
                            {"std_error", zp_se},
                            {"per_replicate", zero_props},
                            {"zero_tol", tol_rule},
                            {"reference", zp_ref}};
    out.push_back({"", dump(j)});
  } else {
    std::ostringstream hs;
    hs << csv_header(one, {"underflow: " + std::to_string(hist.underflow),
                           "overflow: " + std::to_string(hist.overflow),
                           "dropped: " + std::to_string(hist.dropped)});
    hs << "bin_left,bin_right,count\n";
    for (std::size_t b = 0; b < hist.counts.size(); ++b)
      hs << format_double(hist.bin_left(b)) << ',' << format_double(hist.bin_right(b)) << ','
         << hist.counts[b] << '\n';
    out.push_back({"", hs.str()});

    std::ostringstream ms;
    ms << csv_header(one) << "h,value,std_error\n";
    for (std::size_t i = 0; i < moments.mean.size(); ++i)
      ms << i + 1 << ',' << format_double(moments.mean[i]) << ',' << format_double(moments.std_error[i]) << '\n';
    out.push_back({"moments", ms.str()});

    std::ostringstream zs;
    zs << csv_header(one) << "theta,zero_proportion,std_error,reference,zero_tol\n";
    zs << format_double(theta) << ',' << format_double(zp_mean) << ',' << format_double(zp_se) << ','
       << format_double(zp_ref) << ',' << tol_rule << '\n';
    out.push_back({"zero", zs.str()});
  }

  if (cfg.dump_matrix) {
    const auto pm = build_matrix(cfg.n, ec.link, ec.dist, cfg.seed, 0);
    std::ostringstream ds;
    ds << csv_header(one, {"matrix: replicate 0, row-major, scaled by n^-1/2"});
    for (std::size_t i = 0; i < pm.entries.size(); ++i) {
      const auto row = pm.entries.row(i);
      for (std::size_t c = 0; c < row.size(); ++c) ds << (c ? "," : "") << format_double(row[c]);
      ds << '\n';
    }
    out.push_back({"matrix", ds.str()});
  }
  return out;
}

// ----------------------------------------------------------------- moments

struct MomentRow {
  int k;
  std::string method;
  double value;
  double std_error;
  double lower;
  double upper;
};

std::optional<double> closed_form_moment(double theta, int k) {
  if (k == 1) return 1.0;
  if (is_integer_theta(theta)) return moment_integer_theta(theta, k);
  if (k == 2) return beta4_closed_form(theta);
  return std::nullopt;
}

std::vector<Artifact> moments(const RunConfig& cfg, double theta) {
  const RunConfig one = single_theta(cfg, theta);
  std::vector<MomentRow> rows;
  std::optional<EnsembleMoments> ens;
  if (has_method(cfg, "ensemble")) {
    EnsembleConfig ec;
    ec.link = LinkSpec::theta_link(theta);
    ec.n = cfg.n;
    ec.reps = cfg.reps;
    ec.dist = parse_distribution(cfg.dist);
    ec.seed = cfg.seed;
    ec.max_order = 2 * cfg.kmax;
    ens = ensemble_moments(ec);
  }
  for (int k = 1; k <= cfg.kmax; ++k) {
    const auto [lower, upper] = moment_bounds(theta, k);
    for (const auto& method : cfg.methods) {
      if (method == "ensemble") {
        const auto i = static_cast<std::size_t>(2 * k - 1);
        rows.push_back({k, method, ens->mean[i], ens->std_error[i], lower, upper});
      } else if (method == "mc" || method == "mixed") {
        const auto mm = method == "mc" ? MomentMethod::mc : MomentMethod::mixed;
        const auto est = lsd_moment(theta, k, mm, cfg.samples, cfg.seed);
        rows.push_back({k, method, est.value, est.std_error, lower, upper});
      } else if (method == "closed-form") {
        if (const auto v = closed_form_moment(theta, k)) rows.push_back({k, method, *v, 0.0, lower, upper});
      }
    }
  }

  if (cfg.format == "json") {
    json j;
    j["config"] = json::parse(config_to_json(one));
    j["rows"] = json::array();
    for (const auto& r : rows)
      j["rows"].push_back({{"k", r.k},
                           {"method", r.method},
                           {"value", r.value},
                           {"std_error", r.std_error},
                           {"lower", r.lower},
                           {"upper", r.upper}});
    return {{"", dump(j)}};
  }
  std::ostringstream os;
  os << csv_header(one, {"value is beta_{2k}; lower/upper are the Catalan and symmetric-word bounds"});
  os << "k,method,value,std_error,lower,upper\n";
  for (const auto& r : rows)
    os << r.k << ',' << r.method << ',' << format_double(r.value) << ',' << format_double(r.std_error) << ','
       << format_double(r.lower) << ',' << format_double(r.upper) << '\n';
  return {{"", os.str()}};
}

// --------------------------------------------------------------- wordlimit

std::vector<Word> selected_words(const RunConfig& cfg) {
  if (!cfg.word.empty()) return {parse_word(cfg.word)};
  if (cfg.k) return enumerate_pair_matched(*cfg.k);
  std::vector<Word> out;
  for (int k = 1; k <= cfg.kmax; ++k) {
    auto ws = enumerate_pair_matched(k);
    out.insert(out.end(), ws.begin(), ws.end());
  }
  return out;
}

std::optional<double> closed_form_word(const Word& w, double theta) {
  if (!is_symmetric(w)) return 0.0;
  if (is_integer_theta(theta)) return std::pow(std::round(theta), w.k() - 1);
  if (is_catalan(w)) {
    if (theta <= 1.0) return 1.0;
    if (w.k() == 2) return catalan4_word_limit(theta);
  }
  return std::nullopt;
}

json estimate_json(const WordLimitEstimate& e) {
  return {{"word", e.word.str()},
          {"theta", e.theta},
          {"method", to_string(e.method)},
          {"value", e.value},
          {"std_error", e.std_error},
          {"samples", e.samples},
          {"gamma_admissible_count", e.gamma_admissible_count},
          {"closure", to_string(e.closure)}};
}

std::vector<Artifact> wordlimit(const RunConfig& cfg, double theta) {
  const RunConfig one = single_theta(cfg, theta);
  const auto words = selected_words(cfg);
  json reports = json::array();
  std::vector<std::pair<WordLimitEstimate, const Word*>> flat;
  for (std::size_t i = 0; i < words.size(); ++i) {
    const Word& w = words[i];
    const LinearRep rep = linear_representation(w);
    const Closure closure = closure_type(rep);
    std::vector<WordLimitEstimate> ests;
    for (const auto& method : cfg.methods) {
      if (method == "mc") {
        ests.push_back(word_limit_mc(w, theta, cfg.samples, derive_seed(cfg.seed, i)));
      } else if (method == "catalan") {
        if (is_catalan(w)) ests.push_back(word_limit_catalan(w, theta).estimate);
      } else if (method == "finite-n") {
        ests.push_back(word_limit_finite_n(w, cfg.n, theta, cfg.budget));
      } else if (method == "closed-form") {
        if (const auto v = closed_form_word(w, theta)) {
          WordLimitEstimate e;
          e.word = w;
          e.theta = theta;
          e.method = LimitMethod::closed_form;
          e.value = *v;
          e.closure = closure;
          e.gamma_admissible_count = count_admissible_gammas(rep, theta);
          ests.push_back(e);
        }
      }
    }
    json r{{"word", w.str()},
           {"symmetric", is_symmetric(w)},
           {"catalan", is_catalan(w)},
           {"closure", to_string(closure)},
           {"estimates", json::array()}};
    for (const auto& e : ests) {
      r["estimates"].push_back(estimate_json(e));
      flat.emplace_back(e, &w);
    }
    reports.push_back(r);
  }

  if (cfg.format == "json") {
    json j;
    j["config"] = json::parse(config_to_json(one));
    j["words"] = reports;
    return {{"", dump(j)}};
  }
  std::ostringstream os;
  os << csv_header(one);
  os << "word,theta,method,value,std_error,samples,gamma_admissible_count,closure,symmetric,catalan\n";
  for (const auto& [e, w] : flat)
    os << e.word.str() << ',' << format_double(e.theta) << ',' << to_string(e.method) << ','
       << format_double(e.value) << ',' << format_double(e.std_error) << ',' << e.samples << ','
       << e.gamma_admissible_count << ',' << to_string(e.closure) << ',' << csv_bool(is_symmetric(*w)) << ','
       << csv_bool(is_catalan(*w)) << '\n';
  return {{"", os.str()}};
}

// ----------------------------------------------------------------- compare

std::vector<Artifact> compare(const RunConfig& cfg, double theta) {
  const RunConfig one = single_theta(cfg, theta);
  EnsembleConfig ec;
  ec.link = LinkSpec::theta_link(theta);
  ec.n = cfg.n;
  ec.reps = cfg.reps;
  ec.dist = parse_distribution(cfg.dist);
  ec.seed = cfg.seed;
  const auto spectra = ensemble_spectra(ec);

  std::vector<double> pooled;
  std::int64_t zeros = 0, total = 0;
  for (auto eigs : spectra) {
    const double tol = cfg.zero_tol.value_or(default_zero_tol(eigs));
    snap_zeros(eigs, tol);
    for (double x : eigs) {
      ++total;
      if (x == 0.0) {
        ++zeros;
        if (cfg.exclude_zero) continue;
      }
      pooled.push_back(x);
    }
  }
  std::sort(pooled.begin(), pooled.end());

  const bool integer = is_integer_theta(theta);
  std::function<double(double)> cdf;
  std::string reference;
  const double root = std::sqrt(theta);
  if (integer && !cfg.exclude_zero) {
    cdf = [theta](double x) { return integer_theta_cdf(theta, x); };
    reference = "integer-theta law B*sqrt(theta)*R";
  } else if (integer) {
    cdf = [root](double x) { return rayleigh_cdf(x / root); };
    reference = "sqrt(theta)*R, the law without its atom at zero";
  } else {
    cdf = [root](double x) { return rayleigh_cdf(x / root); };
    reference = "F_1(x/sqrt(theta)), not the LSD";
  }
  const double ks = pooled.empty() ? 1.0 : ks_distance(pooled, cdf);
  const double zp = static_cast<double>(zeros) / static_cast<double>(total);

  double m = 0.0;
  for (double x : pooled) m = std::max(m, std::abs(x));
  if (m == 0.0) m = 1.0;
  std::vector<double> xs, emp, ref;
  for (int i = 0; i < cfg.points; ++i) {
    const double x = -m + 2.0 * m * i / (cfg.points - 1);
    const auto below = std::upper_bound(pooled.begin(), pooled.end(), x) - pooled.begin();
    xs.push_back(x);
    emp.push_back(pooled.empty() ? 0.0 : static_cast<double>(below) / static_cast<double>(pooled.size()));
    ref.push_back(cdf(x));
  }

  if (cfg.format == "json") {
    json j;
    j["config"] = json::parse(config_to_json(one));
    j["reference"] = reference;
    j["is_lsd"] = integer;
    j["ks"] = ks;
    j["zero_proportion"] = zp;
    j["sample_size"] = pooled.size();
    j["table"] = {{"x", xs}, {"empirical_cdf", emp}, {"reference_cdf", ref}};
    return {{"", dump(j)}};
  }
  std::ostringstream os;
  os << csv_header(one, {"reference: " + reference, "is_lsd: " + csv_bool(integer), "ks: " + format_double(ks),
                         "zero_proportion: " + format_double(zp),
                         "sample_size: " + std::to_string(pooled.size())});
  os << "x,empirical_cdf,reference_cdf\n";
  for (std::size_t i = 0; i < xs.size(); ++i)
    os << format_double(xs[i]) << ',' << format_double(emp[i]) << ',' << format_double(ref[i]) << '\n';
  return {{"", os.str()}};
}

// ------------------------------------------------------------------- words

std::vector<Artifact> words(const RunConfig& cfg) {
  std::vector<Word> ws;
  if (cfg.k) {
    ws = enumerate_pair_matched(*cfg.k);
  } else {
    for (int k = 1; k <= cfg.kmax; ++k) {
      auto e = enumerate_pair_matched(k);
      ws.insert(ws.end(), e.begin(), e.end());
    }
  }
  const auto gen_text = [](const Word& w) {
    std::string s;
    for (int v : generating_vertices(w)) s += (s.empty() ? "" : " ") + std::to_string(v);
    return s;
  };
  if (cfg.format == "json") {
    json j;
    j["config"] = json::parse(config_to_json(cfg));
    j["words"] = json::array();
    for (const auto& w : ws)
      j["words"].push_back({{"word", w.str()},
                            {"k", w.k()},
                            {"symmetric", is_symmetric(w)},
                            {"catalan", is_catalan(w)},
                            {"closure", to_string(closure_type(linear_representation(w)))},
                            {"generating_vertices", generating_vertices(w)}});
    return {{"", dump(j)}};
  }
  std::ostringstream os;
  os << csv_header(cfg) << "word,k,symmetric,catalan,closure,generating_vertices\n";
  for (const auto& w : ws)
    os << w.str() << ',' << w.k() << ',' << csv_bool(is_symmetric(w)) << ',' << csv_bool(is_catalan(w)) << ','
       << to_string(closure_type(linear_representation(w))) << ',' << gen_text(w) << '\n';
  return {{"", os.str()}};
}

std::vector<Artifact> run_single(const RunConfig& cfg, double theta) {
  if (cfg.command == "simulate") return simulate(cfg, theta);
  if (cfg.command == "moments") return moments(cfg, theta);
  if (cfg.command == "wordlimit") return wordlimit(cfg, theta);
  if (cfg.command == "compare") return compare(cfg, theta);
  throw std::invalid_argument("unknown command '" + cfg.command + "'");
}

void emit(const std::string& path, const std::vector<Artifact>& arts, std::ostream& out) {
  for (const auto& a : arts) {
    if (path.empty()) {
      out << a.body;
    } else {
      write_atomic(a.tag.empty() ? path : with_tag(path, a.tag), a.body);
    }
  }
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string with_tag(const std::string& path, const std::string& tag) {
  const std::filesystem::path p(path);
  const auto ext = p.extension().string();
  auto stem = p;
  stem.replace_extension();
  return stem.string() + "." + tag + ext;
}

std::string config_to_json(const RunConfig& cfg) {
  json j;
  j["command"] = cfg.command;
  j["thetas"] = cfg.thetas;
  j["grid"] = cfg.grid;
  j["n"] = cfg.n;
  j["reps"] = cfg.reps;
  j["kmax"] = cfg.kmax;
  j["k"] = cfg.k ? json(*cfg.k) : json(nullptr);
  j["word"] = cfg.word;
  j["methods"] = cfg.methods;
  j["samples"] = cfg.samples;
  j["seed"] = cfg.seed;
  j["dist"] = cfg.dist;
  j["bins"] = cfg.bins;
  j["range"] = cfg.range ? json::array({cfg.range->first, cfg.range->second}) : json(nullptr);
  j["exclude_zero"] = cfg.exclude_zero;
  j["zero_tol"] = cfg.zero_tol ? json(*cfg.zero_tol) : json(nullptr);
  j["budget"] = cfg.budget;
  j["points"] = cfg.points;
  j["dump_matrix"] = cfg.dump_matrix;
  j["out"] = cfg.out;
  j["format"] = cfg.format;
  return j.dump();
}

RunConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("embedded config is not valid JSON: ") + e.what());
  }
  RunConfig cfg;
  try {
    cfg.command = j.at("command").get<std::string>();
    cfg.thetas = j.at("thetas").get<std::vector<double>>();
    cfg.grid = j.at("grid").get<bool>();
    cfg.n = j.at("n").get<std::int64_t>();
    cfg.reps = j.at("reps").get<int>();
    cfg.kmax = j.at("kmax").get<int>();
    if (!j.at("k").is_null()) cfg.k = j.at("k").get<int>();
    cfg.word = j.at("word").get<std::string>();
    cfg.methods = j.at("methods").get<std::vector<std::string>>();
    cfg.samples = j.at("samples").get<std::int64_t>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.dist = j.at("dist").get<std::string>();
    cfg.bins = j.at("bins").get<int>();
    if (!j.at("range").is_null()) cfg.range = std::pair{j.at("range")[0].get<double>(), j.at("range")[1].get<double>()};
    cfg.exclude_zero = j.at("exclude_zero").get<bool>();
    if (!j.at("zero_tol").is_null()) cfg.zero_tol = j.at("zero_tol").get<double>();
    cfg.budget = j.at("budget").get<std::int64_t>();
    cfg.points = j.at("points").get<int>();
    cfg.dump_matrix = j.at("dump_matrix").get<bool>();
    cfg.out = j.at("out").get<std::string>();
    cfg.format = j.at("format").get<std::string>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("embedded config is incomplete: ") + e.what());
  }
  return cfg;
}

RunConfig config_from_output(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot read '" + path + "'");
  std::stringstream ss;
  ss << is.rdbuf();
  const std::string text = ss.str();
  const std::string marker = "# config: ";
  const auto pos = text.find(marker);
  if (pos != std::string::npos) {
    const auto start = pos + marker.size();
    return config_from_json(text.substr(start, text.find('\n', start) - start));
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception&) {
    throw std::invalid_argument("'" + path + "' carries no embedded config");
  }
  if (!j.is_object() || !j.contains("config"))
    throw std::invalid_argument("'" + path + "' carries no embedded config");
  return config_from_json(j["config"].dump());
}

void validate(const RunConfig& cfg) {
  if (!kCommands.count(cfg.command)) throw std::invalid_argument("unknown command '" + cfg.command + "'");
  if (cfg.format != "csv" && cfg.format != "json")
    throw std::invalid_argument("--format must be csv or json");
  parse_distribution(cfg.dist);
  if (cfg.n < 1) throw std::invalid_argument("--n must be >= 1");
  if (cfg.reps < 1) throw std::invalid_argument("--reps must be >= 1");
  if (cfg.samples < 1) throw std::invalid_argument("--samples must be >= 1");
  if (cfg.bins < 1) throw std::invalid_argument("--bins must be >= 1");
  if (cfg.points < 2) throw std::invalid_argument("--points must be >= 2");
  if (cfg.budget < 1) throw std::invalid_argument("--budget must be >= 1");
  if (cfg.range && !(cfg.range->first < cfg.range->second && std::isfinite(cfg.range->first) &&
                     std::isfinite(cfg.range->second)))
    throw std::invalid_argument("--range needs finite lo < hi");
  if (cfg.zero_tol && !(*cfg.zero_tol > 0.0)) throw std::invalid_argument("--zero-tol must be > 0");
  if (cfg.kmax < 1 || cfg.kmax > kMaxEnumerationK) throw std::invalid_argument("--kmax must be in [1, 6]");
  if (cfg.k && (*cfg.k < 1 || *cfg.k > kMaxEnumerationK)) throw std::invalid_argument("--k must be in [1, 6]");
  if (cfg.dump_matrix && cfg.command != "simulate")
    throw std::invalid_argument("--dump-matrix only applies to simulate");
  if (cfg.command == "words") return;

  if (cfg.thetas.empty()) throw std::invalid_argument("give --theta or --theta-grid");
  if (cfg.grid && cfg.out.empty() && cfg.format == "json" && cfg.thetas.size() > 1)
    throw std::invalid_argument("a JSON theta-grid run needs --out (one file per theta plus an index)");
  for (double t : cfg.thetas) {
    if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("theta must be a positive finite number");
    const bool needs_matrix = cfg.command == "simulate" || cfg.command == "compare" ||
                              (cfg.command == "moments" && has_method(cfg, "ensemble"));
    if (needs_matrix) LinkSpec::theta_link(t).modulus(cfg.n);
    if (cfg.command == "wordlimit" && has_method(cfg, "finite-n")) LinkSpec::theta_link(t).modulus(cfg.n);
  }
  const auto allowed = allowed_methods(cfg.command);
  if (!allowed.empty()) {
    if (cfg.methods.empty()) throw std::invalid_argument("--method list is empty");
    for (const auto& m : cfg.methods)
      if (!allowed.count(m)) throw std::invalid_argument("method '" + m + "' is not available for " + cfg.command);
  } else if (!cfg.methods.empty()) {
    throw std::invalid_argument("--method does not apply to " + cfg.command);
  }
  if (cfg.command == "moments" && (has_method(cfg, "mc") || has_method(cfg, "mixed")) && cfg.kmax > kMaxMcMomentK)
    throw std::invalid_argument("--kmax must be <= 4 for word-sum methods");
  if (cfg.command == "wordlimit" && !cfg.word.empty()) parse_word(cfg.word);
  if (cfg.command == "wordlimit" && cfg.word.empty() && !cfg.k && cfg.kmax > kMaxMcMomentK)
    throw std::invalid_argument("--kmax must be <= 4 when iterating words; use --k for one length");
}

void execute(const RunConfig& cfg, std::ostream& out) {
  if (cfg.command == "words") {
    emit(cfg.out, words(cfg), out);
    return;
  }
  if (!cfg.grid) {
    emit(cfg.out, run_single(cfg, cfg.thetas.front()), out);
    return;
  }
  // One file per theta plus an index.
  std::vector<std::pair<double, std::string>> index;
  for (double theta : cfg.thetas) {
    const auto arts = run_single(cfg, theta);
    if (cfg.out.empty()) {
      emit("", arts, out);
      continue;
    }
    const std::string path = with_tag(cfg.out, theta_tag(theta));
    emit(path, arts, out);
    index.emplace_back(theta, path);
  }
  if (cfg.out.empty()) return;
  if (cfg.format == "json") {
    json j;
    j["config"] = json::parse(config_to_json(cfg));
    j["files"] = json::array();
    for (const auto& [t, p] : index) j["files"].push_back({{"theta", t}, {"file", p}});
    write_atomic(cfg.out, dump(j));
  } else {
    std::ostringstream os;
    os << csv_header(cfg) << "theta,file\n";
    for (const auto& [t, p] : index) os << format_double(t) << ',' << p << '\n';
    write_atomic(cfg.out, os.str());
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectra and moment limits of i+j mod floor(n/theta) patterned random matrices", "genhankel"};
  app.require_subcommand(0, 1);
  std::string replay;
  std::string replay_out;
  app.add_option("--replay", replay, "Re-run the config embedded in an output file");
  app.add_option("--replay-out", replay_out, "Output path for --replay (default: stdout)");

  RunConfig cfg;
  std::optional<double> theta;
  std::string theta_grid, range, methods;
  std::optional<int> reps;

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "RNG seed");
    sub->add_option("--out", cfg.out, "Output path (default: stdout)");
    sub->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };
  const auto thetas = [&](CLI::App* sub) {
    auto* t = sub->add_option("--theta", theta, "Link parameter theta > 0");
    auto* g = sub->add_option("--theta-grid", theta_grid, "Comma list or lo:step:hi");
    t->excludes(g);
  };
  const auto ensemble = [&](CLI::App* sub) {
    sub->add_option("--n", cfg.n, "Matrix dimension");
    sub->add_option("--reps", reps, "Independent replicates");
    sub->add_option("--dist", cfg.dist, "gaussian, rademacher or uniform");
  };

  auto* sim = app.add_subcommand("simulate", "Ensemble spectra: histogram, moments and zero proportion");
  common(sim);
  thetas(sim);
  ensemble(sim);
  sim->add_option("--kmax", cfg.kmax, "Moments up to order 2*kmax");
  sim->add_option("--bins", cfg.bins, "Histogram bins");
  sim->add_option("--range", range, "Histogram range lo,hi (default: -max|lambda|,max|lambda|)");
  sim->add_flag("--exclude-zero", cfg.exclude_zero, "Drop zero eigenvalues before binning");
  sim->add_option("--zero-tol", cfg.zero_tol, "Zero tolerance (default 1e-6*(1+max|lambda|))");
  sim->add_flag("--dump-matrix", cfg.dump_matrix, "Also emit replicate 0 as a CSV matrix");

  auto* mom = app.add_subcommand("moments", "Table of beta_{2k} by method with bounds");
  common(mom);
  thetas(mom);
  ensemble(mom);
  mom->add_option("--kmax", cfg.kmax, "Largest k");
  mom->add_option("--method", methods, "Comma list of ensemble, mc, mixed, closed-form");
  mom->add_option("--samples", cfg.samples, "Monte Carlo samples per word");

  auto* wl = app.add_subcommand("wordlimit", "Word limits p_theta(w)");
  common(wl);
  thetas(wl);
  wl->add_option("--word", cfg.word, "Canonical word such as abba");
  wl->add_option("--k", cfg.k, "All words of length 2k");
  wl->add_option("--kmax", cfg.kmax, "All words with k <= kmax (when neither --word nor --k)");
  wl->add_option("--method", methods, "Comma list of mc, catalan, finite-n, closed-form");
  wl->add_option("--samples", cfg.samples, "Monte Carlo samples");
  wl->add_option("--n", cfg.n, "Dimension for finite-n counting");
  wl->add_option("--budget", cfg.budget, "Work budget for finite-n counting");

  auto* cmp = app.add_subcommand("compare", "ESD against the limiting law, KS distance and cdf table");
  common(cmp);
  thetas(cmp);
  ensemble(cmp);
  cmp->add_flag("--exclude-zero", cfg.exclude_zero, "Drop zero eigenvalues first");
  cmp->add_option("--zero-tol", cfg.zero_tol, "Zero tolerance (default 1e-6*(1+max|lambda|))");
  cmp->add_option("--points", cfg.points, "Rows in the cdf table");

  auto* wd = app.add_subcommand("words", "List pair-matched words with their classes");
  common(wd);
  wd->add_option("--k", cfg.k, "Words of length 2k");
  wd->add_option("--kmax", cfg.kmax, "All words with k <= kmax");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (!replay.empty()) {
      if (!app.get_subcommands().empty())
        throw std::invalid_argument("--replay cannot be combined with a subcommand");
      RunConfig r = config_from_output(replay);
      r.out = replay_out;
      validate(r);
      execute(r, out);
      return kExitOk;
    }
    if (app.get_subcommands().empty()) throw std::invalid_argument("a subcommand is required (see --help)");
    cfg.command = app.get_subcommands().front()->get_name();
    if (theta) cfg.thetas = {*theta};
    if (!theta_grid.empty()) {
      cfg.thetas = parse_theta_grid(theta_grid);
      cfg.grid = true;
    }
    if (!range.empty()) cfg.range = parse_range(range);
    cfg.methods = methods.empty() ? default_methods(cfg.command) : split(methods, ',');
    cfg.reps = reps.value_or(1);
    validate(cfg);
    execute(cfg, out);
    return kExitOk;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace genhankel::cli
