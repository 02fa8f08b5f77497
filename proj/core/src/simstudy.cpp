#include "ginar/simstudy.hpp"

#include <atomic>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "ginar/rng.hpp"

namespace ginar {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& s, const std::string& key) {
  size_t pos = 0;
  double v;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("study config: bad number for " + key);
  }
  if (pos != s.size()) throw std::invalid_argument("study config: bad number for " + key);
  return v;
}

long parse_long(const std::string& s, const std::string& key) {
  size_t pos = 0;
  long v;
  try {
    v = std::stol(s, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("study config: bad integer for " + key);
  }
  if (pos != s.size())
    throw std::invalid_argument("study config: bad integer for " + key);
  return v;
}

std::uint64_t hash_bytes(const std::string& s) {
  std::uint64_t h = 0x6a09e667f3bcc909ULL;
  for (unsigned char c : s) h = mix64(h ^ (c + 0x9e3779b97f4a7c15ULL));
  return h;
}

std::uint64_t config_fingerprint(const StudyConfig& c) {
  std::string s = family_name(c.family);
  s += "|" + std::to_string(c.p);
  for (double v : c.theta) s += "|" + fmt17(v);
  s += "|" + std::to_string(c.seed);
  s += "|" + std::to_string(c.burnin);
  s += "|" + std::to_string(c.replicates);
  s += "|" + std::to_string(c.options.transition == TransitionMethod::Exact ? 0 : 1);
  s += "|" + std::to_string(c.options.quad_nodes);
  s += "|" + fmt17(c.options.grad_tol);
  s += "|" + std::to_string(c.options.max_iterations);
  return hash_bytes(s);
}

struct RawCell {
  // one entry per replicate, empty vector marks a failure
  std::vector<std::vector<double>> est;
};

std::filesystem::path cache_path(const StudyConfig& c, int n, Method m) {
  char tag[32];
  std::snprintf(tag, sizeof(tag), "%016" PRIx64, config_fingerprint(c));
  return *c.cache_dir /
         ("raw_" + std::string(tag) + "_" + std::to_string(n) + "_" + method_name(m) +
          ".csv");
}

bool load_raw(const std::filesystem::path& file, int replicates, int dim, RawCell& out) {
  std::ifstream in(file);
  if (!in) return false;
  out.est.assign(replicates, {});
  int rows = 0;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    const std::vector<std::string> parts = split_list(line);
    if (parts.size() < 2) return false;
    const long r = parse_long(parts[0], "cache row");
    if (r < 0 || r >= replicates) return false;
    if (parts[1] == "FAIL") {
      out.est[r].clear();
    } else {
      if (static_cast<int>(parts.size()) != dim + 1) return false;
      std::vector<double> theta(dim);
      for (int j = 0; j < dim; ++j) theta[j] = parse_double(parts[j + 1], "cache row");
      out.est[r] = std::move(theta);
    }
    ++rows;
  }
  return rows == replicates;
}

void store_raw(const std::filesystem::path& file, const RawCell& cell,
               const std::vector<bool>& ok) {
  const std::filesystem::path tmp = file.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("study cache: cannot write " + tmp.string());
    for (size_t r = 0; r < cell.est.size(); ++r) {
      out << r;
      if (!ok[r]) {
        out << ",FAIL";
      } else {
        for (double v : cell.est[r]) out << ',' << fmt17(v);
      }
      out << '\n';
    }
  }
  std::filesystem::rename(tmp, file);
}

RawCell compute_raw(const StudyConfig& c, int n, Method method) {
  const GinarModel model = make_model(c.family, c.p, c.theta);
  const int dim = theta_dim(c.family, c.p);
  RawCell cell;
  cell.est.assign(c.replicates, {});
  std::vector<bool> ok(c.replicates, false);

  std::atomic<int> next{0};
  const auto worker = [&]() {
    for (;;) {
      const int r = next.fetch_add(1);
      if (r >= c.replicates) return;
      RandomStream rng = make_stream(
          c.seed, {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(r)});
      try {
        const std::vector<int> x = simulate(model, n, c.burnin, rng);
        const FitResult fit = fit_series(x, c.p, c.family, method, c.options);
        if (static_cast<int>(fit.theta.size()) != dim)
          throw std::runtime_error("study: estimate dimension mismatch");
        cell.est[r] = fit.theta;
        ok[r] = true;
      } catch (const std::exception&) {
        ok[r] = false;
      }
    }
  };

  const int nthreads = std::max(1, c.threads);
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (int r = 0; r < c.replicates; ++r)
    if (!ok[r]) cell.est[r].clear();
  if (c.cache_dir) {
    std::filesystem::create_directories(*c.cache_dir);
    store_raw(cache_path(c, n, method), cell, ok);
  }
  return cell;
}

struct Summary {
  std::vector<double> bias, sd, rmse;
};

Summary summarize(const std::vector<const std::vector<double>*>& est,
                  const std::vector<double>& truth) {
  const int dim = static_cast<int>(truth.size());
  const int m = static_cast<int>(est.size());
  Summary s;
  s.bias.assign(dim, 0.0);
  s.sd.assign(dim, 0.0);
  s.rmse.assign(dim, 0.0);
  for (int j = 0; j < dim; ++j) {
    double mean = 0.0;
    for (const auto* v : est) mean += (*v)[j];
    mean /= m;
    double var = 0.0;
    for (const auto* v : est) var += ((*v)[j] - mean) * ((*v)[j] - mean);
    var /= m;
    s.bias[j] = mean - truth[j];
    s.sd[j] = std::sqrt(var);
    s.rmse[j] = std::sqrt(s.bias[j] * s.bias[j] + var);
  }
  return s;
}

}  // namespace

StudyConfig parse_study_config(std::istream& in) {
  StudyConfig c;
  bool saw_family = false, saw_p = false, saw_alpha = false, saw_mu = false,
       saw_sizes = false, saw_reps = false, saw_methods = false, saw_seed = false;
  std::vector<double> alpha;
  double mu = 0.0, r = 0.0;
  bool saw_r = false;

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("study config: line " + std::to_string(lineno) +
                                  " is not key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (val.empty())
      throw std::invalid_argument("study config: empty value for " + key);

    if (key == "family") {
      const auto fam = parse_family(val);
      if (!fam) throw std::invalid_argument("study config: unknown family " + val);
      c.family = *fam;
      saw_family = true;
    } else if (key == "p") {
      c.p = static_cast<int>(parse_long(val, key));
      saw_p = true;
    } else if (key == "alpha") {
      alpha.clear();
      for (const std::string& tok : split_list(val))
        alpha.push_back(parse_double(tok, key));
      saw_alpha = true;
    } else if (key == "mu_eps") {
      mu = parse_double(val, key);
      saw_mu = true;
    } else if (key == "r") {
      r = parse_double(val, key);
      saw_r = true;
    } else if (key == "sizes") {
      c.sizes.clear();
      for (const std::string& tok : split_list(val))
        c.sizes.push_back(static_cast<int>(parse_long(tok, key)));
      saw_sizes = true;
    } else if (key == "replicates") {
      c.replicates = static_cast<int>(parse_long(val, key));
      saw_reps = true;
    } else if (key == "methods") {
      c.methods.clear();
      for (const std::string& tok : split_list(val)) {
        const auto m = parse_method(tok);
        if (!m) throw std::invalid_argument("study config: unknown method " + tok);
        c.methods.push_back(*m);
      }
      saw_methods = true;
    } else if (key == "seed") {
      c.seed = static_cast<std::uint64_t>(parse_long(val, key));
      saw_seed = true;
    } else if (key == "burnin") {
      c.burnin = static_cast<int>(parse_long(val, key));
    } else if (key == "bootstrap") {
      c.bootstrap = static_cast<int>(parse_long(val, key));
    } else if (key == "threads") {
      c.threads = static_cast<int>(parse_long(val, key));
    } else if (key == "cache_dir") {
      c.cache_dir = std::filesystem::path(val);
    } else if (key == "transition") {
      if (val == "exact")
        c.options.transition = TransitionMethod::Exact;
      else if (val == "davies")
        c.options.transition = TransitionMethod::Davies;
      else
        throw std::invalid_argument("study config: unknown transition " + val);
    } else if (key == "quad_nodes") {
      c.options.quad_nodes = static_cast<int>(parse_long(val, key));
    } else {
      throw std::invalid_argument("study config: unknown key " + key);
    }
  }

  if (!saw_family || !saw_p || !saw_alpha || !saw_mu || !saw_sizes || !saw_reps ||
      !saw_methods || !saw_seed)
    throw std::invalid_argument(
        "study config: family, p, alpha, mu_eps, sizes, replicates, methods and "
        "seed are required");
  if (static_cast<int>(alpha.size()) != c.p)
    throw std::invalid_argument("study config: alpha must list p values");
  const bool needs_r = c.family.innovation == Innovation::NegBinomial;
  if (needs_r != saw_r)
    throw std::invalid_argument(needs_r ? "study config: r is required for nb-inar"
                                        : "study config: r is only valid for nb-inar");
  c.theta = alpha;
  c.theta.push_back(mu);
  if (needs_r) c.theta.push_back(r);
  make_model(c.family, c.p, c.theta);  // validates
  if (c.sizes.empty() || c.methods.empty())
    throw std::invalid_argument("study config: sizes and methods must be nonempty");
  for (int n : c.sizes)
    if (n < 10) throw std::invalid_argument("study config: sizes must be at least 10");
  if (c.replicates < 2)
    throw std::invalid_argument("study config: replicates must be at least 2");
  return c;
}

StudyConfig parse_study_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("study config: cannot open " + path.string());
  return parse_study_config(in);
}

StudyResult run_study(const StudyConfig& config) {
  if (config.replicates < 2)
    throw std::invalid_argument("study: replicates must be at least 2");
  make_model(config.family, config.p, config.theta);
  const int dim = theta_dim(config.family, config.p);

  StudyResult result;
  result.config = config;
  for (int n : config.sizes) {
    for (Method method : config.methods) {
      RawCell raw;
      bool loaded = false;
      if (config.cache_dir) {
        const std::filesystem::path file = cache_path(config, n, method);
        loaded = load_raw(file, config.replicates, dim, raw);
      }
      if (!loaded) raw = compute_raw(config, n, method);

      std::vector<const std::vector<double>*> ok;
      for (const auto& v : raw.est)
        if (!v.empty()) ok.push_back(&v);
      if (static_cast<int>(ok.size()) < 2)
        throw std::runtime_error("study: fewer than two successful replicates");

      StudyCell cell;
      cell.n = n;
      cell.method = method;
      cell.replicates_ok = static_cast<int>(ok.size());
      cell.failures = config.replicates - cell.replicates_ok;
      cell.params = theta_names(config.family, config.p);
      cell.truth = config.theta;
      const Summary s = summarize(ok, config.theta);
      cell.bias = s.bias;
      cell.sd = s.sd;
      cell.rmse = s.rmse;

      // resampling standard errors for the summary statistics
      const int B = config.bootstrap;
      RandomStream rng = make_stream(
          config.seed, {0xB007ULL, static_cast<std::uint64_t>(n),
                        static_cast<std::uint64_t>(method)});
      std::uniform_int_distribution<int> pick(0, cell.replicates_ok - 1);
      std::vector<Summary> boots;
      boots.reserve(B);
      std::vector<const std::vector<double>*> res(ok.size());
      for (int b = 0; b < B; ++b) {
        for (size_t i = 0; i < ok.size(); ++i) res[i] = ok[pick(rng)];
        boots.push_back(summarize(res, config.theta));
      }
      cell.bias_se.assign(dim, 0.0);
      cell.sd_se.assign(dim, 0.0);
      cell.rmse_se.assign(dim, 0.0);
      for (int j = 0; j < dim; ++j) {
        double mb = 0.0, ms = 0.0, mr = 0.0;
        for (const Summary& s2 : boots) {
          mb += s2.bias[j];
          ms += s2.sd[j];
          mr += s2.rmse[j];
        }
        mb /= B;
        ms /= B;
        mr /= B;
        double vb = 0.0, vs = 0.0, vr = 0.0;
        for (const Summary& s2 : boots) {
          vb += (s2.bias[j] - mb) * (s2.bias[j] - mb);
          vs += (s2.sd[j] - ms) * (s2.sd[j] - ms);
          vr += (s2.rmse[j] - mr) * (s2.rmse[j] - mr);
        }
        cell.bias_se[j] = std::sqrt(vb / B);
        cell.sd_se[j] = std::sqrt(vs / B);
        cell.rmse_se[j] = std::sqrt(vr / B);
      }
      result.cells.push_back(std::move(cell));
    }
  }
  return result;
}

std::string study_csv(const StudyResult& result) {
  std::string out =
      "n,method,param,truth,bias,bias_se,sd,sd_se,rmse,rmse_se,ok,failed\n";
  for (const StudyCell& c : result.cells) {
    for (size_t j = 0; j < c.params.size(); ++j) {
      out += std::to_string(c.n) + "," + method_name(c.method) + "," + c.params[j] +
             "," + fmt17(c.truth[j]) + "," + fmt17(c.bias[j]) + "," +
             fmt17(c.bias_se[j]) + "," + fmt17(c.sd[j]) + "," + fmt17(c.sd_se[j]) +
             "," + fmt17(c.rmse[j]) + "," + fmt17(c.rmse_se[j]) + "," +
             std::to_string(c.replicates_ok) + "," + std::to_string(c.failures) +
             "\n";
    }
  }
  return out;
}

std::vector<StudyCell> parse_study_csv(std::istream& in) {
  std::vector<StudyCell> cells;
  std::string line;
  if (!std::getline(in, line))
    throw std::invalid_argument("study csv: missing header");
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    const std::vector<std::string> f = split_list(line);
    if (f.size() != 12) throw std::invalid_argument("study csv: bad row " + line);
    const int n = static_cast<int>(parse_long(f[0], "n"));
    const auto method = parse_method(f[1]);
    if (!method) throw std::invalid_argument("study csv: unknown method " + f[1]);
    if (cells.empty() || cells.back().n != n || cells.back().method != *method) {
      StudyCell cell;
      cell.n = n;
      cell.method = *method;
      cell.replicates_ok = static_cast<int>(parse_long(f[10], "ok"));
      cell.failures = static_cast<int>(parse_long(f[11], "failed"));
      cells.push_back(std::move(cell));
    }
    StudyCell& cell = cells.back();
    cell.params.push_back(f[2]);
    cell.truth.push_back(parse_double(f[3], "truth"));
    cell.bias.push_back(parse_double(f[4], "bias"));
    cell.bias_se.push_back(parse_double(f[5], "bias_se"));
    cell.sd.push_back(parse_double(f[6], "sd"));
    cell.sd_se.push_back(parse_double(f[7], "sd_se"));
    cell.rmse.push_back(parse_double(f[8], "rmse"));
    cell.rmse_se.push_back(parse_double(f[9], "rmse_se"));
  }
  return cells;
}

std::string study_markdown(const StudyResult& result) {
  std::string out;
  char buf[96];
  out = "| n | method | param | bias | sd | rmse | ok | failed |\n";
  out += "|---|--------|-------|------|----|------|----|--------|\n";
  for (const StudyCell& c : result.cells) {
    for (size_t j = 0; j < c.params.size(); ++j) {
      std::snprintf(buf, sizeof(buf), "| %d | %s | %s | %.4f | %.4f | %.4f | %d | %d |\n",
                    c.n, method_name(c.method).c_str(), c.params[j].c_str(), c.bias[j],
                    c.sd[j], c.rmse[j], c.replicates_ok, c.failures);
      out += buf;
    }
  }
  return out;
}

}  // namespace ginar
