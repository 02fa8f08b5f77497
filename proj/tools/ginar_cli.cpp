#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ginar/estimation.hpp"
#include "ginar/forecast.hpp"
#include "ginar/inference.hpp"
#include "ginar/model.hpp"
#include "ginar/rng.hpp"
#include "ginar/series_io.hpp"
#include "ginar/simstudy.hpp"
#include "json.hpp"

using json = nlohmann::ordered_json;

namespace {

struct ModelArgs {
  std::string family = "po-inar";
  int p = 1;
  std::vector<double> alpha;
  double mu = 1.0;
  double r = 0.0;
  bool has_r = false;
};

void add_family_options(CLI::App* cmd, ModelArgs& args, bool with_params) {
  cmd->add_option("--family", args.family, "model family: po-inar, nb-inar, geom-inar")
      ->check(CLI::IsMember({"po-inar", "nb-inar", "geom-inar"}));
  cmd->add_option("--p", args.p, "autoregressive order")->check(CLI::PositiveNumber);
  if (with_params) {
    cmd->add_option("--alpha", args.alpha, "thinning coefficients, newest lag first")
        ->delimiter(',')
        ->required();
    cmd->add_option("--mu", args.mu, "innovation mean")->required();
    cmd->add_option("--r", args.r, "innovation dispersion (nb-inar only)");
  }
}

ginar::FamilySpec family_of(const ModelArgs& args) {
  const auto fam = ginar::parse_family(args.family);
  if (!fam) throw CLI::ValidationError("--family", "unknown family " + args.family);
  return *fam;
}

ginar::GinarModel model_of(const ModelArgs& args, const CLI::App* cmd) {
  const ginar::FamilySpec fam = family_of(args);
  const bool needs_r = fam.innovation == ginar::Innovation::NegBinomial;
  if (needs_r && cmd->count("--r") == 0)
    throw CLI::ValidationError("--r", "required for nb-inar");
  if (!needs_r && cmd->count("--r") > 0)
    throw CLI::ValidationError("--r", "only valid for nb-inar");
  if (static_cast<int>(args.alpha.size()) != args.p)
    throw CLI::ValidationError("--alpha", "needs exactly p values");
  std::vector<double> theta = args.alpha;
  theta.push_back(args.mu);
  if (needs_r) theta.push_back(args.r);
  return ginar::make_model(fam, args.p, theta);
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file " + path);
  return out;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out = open_output(path);
    out << text;
  }
}

ginar::FitOptions fit_options(const std::string& transition, int quad_nodes) {
  ginar::FitOptions opt;
  opt.transition = transition == "exact" ? ginar::TransitionMethod::Exact
                                         : ginar::TransitionMethod::Davies;
  opt.quad_nodes = quad_nodes;
  return opt;
}

json fit_to_json(const ginar::FitResult& fit, int n) {
  json j;
  j["family"] = ginar::family_name(fit.family);
  j["method"] = ginar::method_name(fit.method);
  j["p"] = fit.p;
  j["n"] = n;
  j["n_used"] = fit.n_used;
  j["converged"] = fit.converged;
  j["iterations"] = fit.iterations;
  j["feasible"] = fit.feasible;
  if (fit.objective)
    j["objective"] = *fit.objective;
  else
    j["objective"] = nullptr;
  json est;
  for (size_t k = 0; k < fit.names.size(); ++k) est[fit.names[k]] = fit.theta[k];
  j["estimates"] = est;
  if (fit.seasonal) {
    j["seasonal"] = {{"b0", fit.seasonal->b0},
                     {"b1", fit.seasonal->b1},
                     {"b2", fit.seasonal->b2},
                     {"period", fit.seasonal->period}};
  }
  return j;
}

int run_simulate(const ModelArgs& margs, const CLI::App* cmd, int n, int burnin,
                 std::uint64_t seed, const std::vector<double>& seasonal_b,
                 int seasonal_period, const std::string& output) {
  ginar::RandomStream rng = ginar::make_stream(seed, {});
  std::vector<int> x;
  if (seasonal_period > 0) {
    if (seasonal_b.size() != 3)
      throw CLI::ValidationError("--seasonal-b", "needs b0,b1,b2");
    ModelArgs adj = margs;
    adj.mu = std::exp(seasonal_b[0]);
    const ginar::GinarModel m = model_of(adj, cmd);
    const ginar::SeasonalMean s{seasonal_b[0], seasonal_b[1], seasonal_b[2],
                                seasonal_period};
    x = ginar::simulate_seasonal(m, s, n, burnin, rng);
  } else {
    if (!seasonal_b.empty())
      throw CLI::ValidationError("--seasonal-b", "needs --seasonal-period");
    const ginar::GinarModel m = model_of(margs, cmd);
    x = ginar::simulate(m, n, burnin, rng);
  }
  if (output.empty()) {
    ginar::write_series(std::cout, x);
  } else {
    std::ofstream out = open_output(output);
    ginar::write_series(out, x);
  }
  return 0;
}

int run_fit(const ModelArgs& margs, const std::string& input, const std::string& method,
            const std::string& transition, int quad_nodes, int seasonal_period,
            const std::string& se, int boot_reps, std::uint64_t boot_seed, double level,
            const std::string& output) {
  const ginar::FamilySpec fam = family_of(margs);
  const auto m = ginar::parse_method(method);
  if (!m) throw CLI::ValidationError("--method", "unknown method " + method);
  ginar::Method use = *m;
  if (seasonal_period > 0) {
    if (use != ginar::Method::Cml)
      throw CLI::ValidationError("--seasonal-period", "only valid with --method cml");
    use = ginar::Method::CmlSeasonal;
  }
  const std::vector<int> x = ginar::read_series_file(input);
  const ginar::FitOptions opt = fit_options(transition, quad_nodes);
  const ginar::FitResult fit =
      ginar::fit_series(x, margs.p, fam, use, opt, seasonal_period);

  json j = fit_to_json(fit, static_cast<int>(x.size()));

  if (!se.empty()) {
    ginar::CovarianceEstimate cov;
    if (se == "observed")
      cov = ginar::cml_covariance(x, fit, ginar::CovSource::Observed, opt);
    else if (se == "sandwich")
      cov = ginar::cml_covariance(x, fit, ginar::CovSource::Sandwich, opt);
    else
      cov = ginar::bootstrap_covariance(x, fit, boot_reps, boot_seed, opt);
    const std::vector<ginar::Interval> ci = ginar::confidence_intervals(fit, cov, level);
    json jse, jci;
    for (size_t k = 0; k < fit.names.size(); ++k) {
      jse[fit.names[k]] = cov.se[k];
      jci[fit.names[k]] = {ci[k].lo, ci[k].hi};
    }
    j["se_source"] = se;
    j["se"] = jse;
    j["ci"] = jci;
    j["level"] = level;
    if (cov.replicates > 0) j["bootstrap_replicates"] = cov.replicates;
  }

  switch (fit.method) {
    case ginar::Method::Cml:
    case ginar::Method::CmlSeasonal:
    case ginar::Method::Pseudo:
    case ginar::Method::Saddlepoint: {
      const ginar::InformationCriteria ic = ginar::information_criteria(fit);
      j["aic"] = ic.aic;
      j["bic"] = ic.bic;
      break;
    }
    default:
      break;
  }

  if (fit.n_used > 21) {
    const std::vector<double> res = ginar::pearson_residuals(x, fit);
    const ginar::LjungBox lb = ginar::ljung_box(res, 20);
    j["ljung_box"] = {
        {"statistic", lb.statistic}, {"p_value", lb.p_value}, {"lags", lb.lags}};
  }

  emit(output, j.dump(2) + "\n");
  return 0;
}

int run_forecast(const ModelArgs& margs, const std::string& input,
                 const std::string& method, const std::string& transition,
                 int quad_nodes, int seasonal_period, int horizon, int paths,
                 double level, std::uint64_t seed, const std::string& output) {
  const ginar::FamilySpec fam = family_of(margs);
  const auto m = ginar::parse_method(method);
  if (!m) throw CLI::ValidationError("--method", "unknown method " + method);
  ginar::Method use = *m;
  if (seasonal_period > 0) {
    if (use != ginar::Method::Cml)
      throw CLI::ValidationError("--seasonal-period", "only valid with --method cml");
    use = ginar::Method::CmlSeasonal;
  }
  const std::vector<int> x = ginar::read_series_file(input);
  const ginar::FitOptions opt = fit_options(transition, quad_nodes);
  const ginar::FitResult fit =
      ginar::fit_series(x, margs.p, fam, use, opt, seasonal_period);
  const ginar::GinarModel model = ginar::fit_model(fit);
  const ginar::SeasonalMean* sp = fit.seasonal ? &*fit.seasonal : nullptr;

  const std::vector<double> means =
      sp ? ginar::forecast_mean_seasonal(model, *sp, x, horizon)
         : ginar::forecast_mean(model, x, horizon);
  const ginar::ForecastResult fc =
      ginar::forecast_mc(model, x, horizon, paths, level, seed, sp);

  json j;
  j["fit"] = fit_to_json(fit, static_cast<int>(x.size()));
  j["horizon"] = horizon;
  j["paths"] = paths;
  j["level"] = level;
  j["seed"] = seed;
  j["mean"] = means;
  json hs = json::array();
  for (int h = 0; h < horizon; ++h) {
    const ginar::HorizonForecast& f = fc.horizons[h];
    json e;
    e["h"] = h + 1;
    e["mean"] = f.mean;
    e["median"] = f.median;
    e["lo"] = f.lo;
    e["hi"] = f.hi;
    e["pmf"] = f.pmf;
    hs.push_back(e);
  }
  j["horizons"] = hs;
  emit(output, j.dump(2) + "\n");
  return 0;
}

int run_study(const std::string& config_path, const std::string& output, bool markdown) {
  const ginar::StudyConfig config = ginar::parse_study_config_file(config_path);
  const ginar::StudyResult result = ginar::run_study(config);
  emit(output, markdown ? ginar::study_markdown(result) : ginar::study_csv(result));
  return 0;
}

int run_acf(const ModelArgs& margs, const CLI::App* cmd, const std::string& input,
            int max_lag, const std::string& output) {
  std::string text = "lag,acf\n";
  char buf[64];
  if (!input.empty()) {
    const std::vector<int> x = ginar::read_series_file(input);
    const std::vector<double> g = ginar::sample_acvf(x, max_lag);
    for (int k = 0; k <= max_lag; ++k) {
      std::snprintf(buf, sizeof(buf), "%d,%.17g\n", k, g[k] / g[0]);
      text += buf;
    }
  } else {
    const ginar::GinarModel m = model_of(margs, cmd);
    const std::vector<double> rho = ginar::acf(m, max_lag);
    for (int k = 0; k <= max_lag; ++k) {
      std::snprintf(buf, sizeof(buf), "%d,%.17g\n", k, rho[k]);
      text += buf;
    }
  }
  emit(output, text);
  return 0;
}

int run_spectrum(const ModelArgs& margs, const CLI::App* cmd, const std::string& input,
                 int points, const std::string& output) {
  std::string text;
  char buf[80];
  if (!input.empty()) {
    const std::vector<int> x = ginar::read_series_file(input);
    const ginar::Periodogram I = ginar::periodogram(x);
    text = "freq,power\n";
    for (size_t j = 0; j < I.freq.size(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", I.freq[j], I.power[j]);
      text += buf;
    }
  } else {
    if (points < 2) throw CLI::ValidationError("--points", "needs at least 2");
    const ginar::GinarModel m = model_of(margs, cmd);
    text = "freq,density\n";
    for (int j = 0; j < points; ++j) {
      const double nu = std::numbers::pi * j / (points - 1);
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", nu, ginar::spectral_density(m, nu));
      text += buf;
    }
  }
  emit(output, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"count time series toolkit for thinning-based autoregressions"};
  app.require_subcommand(1);

  // simulate
  ModelArgs sim_m;
  int sim_n = 500, sim_burnin = 200, sim_period = 0;
  std::uint64_t sim_seed = 1;
  std::vector<double> sim_b;
  std::string sim_out;
  CLI::App* sim = app.add_subcommand("simulate", "draw a realization from a model");
  add_family_options(sim, sim_m, true);
  sim->add_option("--n", sim_n, "series length")->check(CLI::PositiveNumber);
  sim->add_option("--burnin", sim_burnin, "warm-up steps")->check(CLI::NonNegativeNumber);
  sim->add_option("--seed", sim_seed, "random seed");
  sim->add_option("--seasonal-b", sim_b, "seasonal log-mean coefficients b0,b1,b2")
      ->delimiter(',');
  sim->add_option("--seasonal-period", sim_period, "seasonal period");
  sim->add_option("--output,-o", sim_out, "output file (stdout if omitted)");

  // fit
  ModelArgs fit_m;
  std::string fit_in, fit_method = "cml", fit_transition = "davies", fit_se, fit_out;
  int fit_nodes = 300, fit_period = 0, fit_boot = 200;
  std::uint64_t fit_boot_seed = 1;
  double fit_level = 0.95;
  CLI::App* fit = app.add_subcommand("fit", "estimate model parameters from a series");
  add_family_options(fit, fit_m, false);
  fit->add_option("--input,-i", fit_in, "series file")->required();
  fit->add_option("--method", fit_method, "cml, yw, cls, pseudo, whittle, saddle")
      ->check(CLI::IsMember({"cml", "yw", "cls", "pseudo", "whittle", "saddle"}));
  fit->add_option("--transition", fit_transition, "transition evaluation route")
      ->check(CLI::IsMember({"davies", "exact"}));
  fit->add_option("--quad-nodes", fit_nodes, "inversion quadrature nodes")
      ->check(CLI::PositiveNumber);
  fit->add_option("--seasonal-period", fit_period, "fit a seasonal innovation mean");
  fit->add_option("--se", fit_se, "standard errors: observed, sandwich, bootstrap")
      ->check(CLI::IsMember({"observed", "sandwich", "bootstrap"}));
  fit->add_option("--boot-reps", fit_boot, "bootstrap replicates");
  fit->add_option("--boot-seed", fit_boot_seed, "bootstrap seed");
  fit->add_option("--level", fit_level, "confidence level");
  fit->add_option("--output,-o", fit_out, "output file (stdout if omitted)");

  // forecast
  ModelArgs fc_m;
  std::string fc_in, fc_method = "cml", fc_transition = "davies", fc_out;
  int fc_nodes = 300, fc_period = 0, fc_horizon = 1, fc_paths = 5000;
  double fc_level = 0.95;
  std::uint64_t fc_seed = 1;
  CLI::App* fc = app.add_subcommand("forecast", "fit a model and forecast ahead");
  add_family_options(fc, fc_m, false);
  fc->add_option("--input,-i", fc_in, "series file")->required();
  fc->add_option("--method", fc_method, "estimation method")
      ->check(CLI::IsMember({"cml", "yw", "cls", "pseudo", "whittle", "saddle"}));
  fc->add_option("--transition", fc_transition, "transition evaluation route")
      ->check(CLI::IsMember({"davies", "exact"}));
  fc->add_option("--quad-nodes", fc_nodes, "inversion quadrature nodes");
  fc->add_option("--seasonal-period", fc_period, "seasonal innovation mean period");
  fc->add_option("--horizon", fc_horizon, "forecast horizon")->check(CLI::PositiveNumber);
  fc->add_option("--paths", fc_paths, "simulated trajectories")->check(CLI::PositiveNumber);
  fc->add_option("--level", fc_level, "interval level");
  fc->add_option("--seed", fc_seed, "random seed");
  fc->add_option("--output,-o", fc_out, "output file (stdout if omitted)");

  // study
  std::string study_config, study_out;
  bool study_md = false;
  CLI::App* study = app.add_subcommand("study", "run a replication study from a config");
  study->add_option("--config,-c", study_config, "key = value config file")->required();
  study->add_option("--output,-o", study_out, "output file (stdout if omitted)");
  study->add_flag("--markdown", study_md, "emit a markdown table instead of csv");

  // acf
  ModelArgs acf_m;
  std::string acf_in, acf_out;
  int acf_lag = 20;
  CLI::App* acf_cmd = app.add_subcommand("acf", "model or sample autocorrelations");
  add_family_options(acf_cmd, acf_m, true);
  acf_cmd->get_option("--alpha")->required(false);
  acf_cmd->get_option("--mu")->required(false);
  acf_cmd->add_option("--input,-i", acf_in, "series file (sample acf)");
  acf_cmd->add_option("--max-lag", acf_lag, "largest lag")->check(CLI::PositiveNumber);
  acf_cmd->add_option("--output,-o", acf_out, "output file (stdout if omitted)");

  // spectrum
  ModelArgs sp_m;
  std::string sp_in, sp_out;
  int sp_points = 256;
  CLI::App* sp = app.add_subcommand("spectrum", "model spectrum or data periodogram");
  add_family_options(sp, sp_m, true);
  sp->get_option("--alpha")->required(false);
  sp->get_option("--mu")->required(false);
  sp->add_option("--input,-i", sp_in, "series file (periodogram)");
  sp->add_option("--points", sp_points, "grid points on [0, pi]");
  sp->add_option("--output,-o", sp_out, "output file (stdout if omitted)");

  try {
    app.parse(argc, argv);
    if (sim->parsed())
      return run_simulate(sim_m, sim, sim_n, sim_burnin, sim_seed, sim_b, sim_period,
                          sim_out);
    if (fit->parsed())
      return run_fit(fit_m, fit_in, fit_method, fit_transition, fit_nodes, fit_period,
                     fit_se, fit_boot, fit_boot_seed, fit_level, fit_out);
    if (fc->parsed())
      return run_forecast(fc_m, fc_in, fc_method, fc_transition, fc_nodes, fc_period,
                          fc_horizon, fc_paths, fc_level, fc_seed, fc_out);
    if (study->parsed()) return run_study(study_config, study_out, study_md);
    if (acf_cmd->parsed()) return run_acf(acf_m, acf_cmd, acf_in, acf_lag, acf_out);
    if (sp->parsed()) return run_spectrum(sp_m, sp, sp_in, sp_points, sp_out);
    std::cerr << "error: no subcommand given\n";
    return 2;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::domain_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 4;
  }
}
