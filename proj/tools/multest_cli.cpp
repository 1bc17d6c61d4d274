// Command-line front end: apply multiple testing procedures to p-value
// files, export threshold-curve tables, and run Monte Carlo error-rate
// estimates.
//
// Exit codes: 0 success, 2 input/parameter error, 1 internal error.

#include <charconv>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "multest/fdp.hpp"
#include "multest/kfwer.hpp"
#include "multest/sim.hpp"
#include "multest/stepup.hpp"

namespace {

using nlohmann::json;

// Input or parameter problem; maps to exit code 2.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::optional<double> parse_double(const std::string& token) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc{} || res.ptr != last) return std::nullopt;
  return value;
}

// One value per line; a single non-numeric first line is taken as a header.
std::vector<double> read_column(const std::string& path, bool pvalues) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open for reading");
  std::vector<double> values;
  std::string line;
  std::size_t lineno = 0;
  bool first_content_line = true;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string token = trim(line);
    if (token.empty()) continue;
    const auto value = parse_double(token);
    if (!value) {
      if (first_content_line) {  // header
        first_content_line = false;
        continue;
      }
      throw InputError(path + ":" + std::to_string(lineno) +
                       ": cannot parse '" + token + "' as a number");
    }
    if (pvalues && !(*value >= 0.0 && *value <= 1.0)) {
      throw InputError(path + ":" + std::to_string(lineno) + ": p-value " +
                       format_double(*value) + " outside [0,1]");
    }
    first_content_line = false;
    values.push_back(*value);
  }
  if (values.empty()) {
    throw InputError(path + ": no numeric values found");
  }
  return values;
}

struct RunConfig {
  std::string procedure;
  double alpha = 0.05;
  double gamma = 0.1;
  int k = 1;
  std::string estimator;
  std::string weights_path;
  std::string curve;
  std::string input_path;
  std::string output_path;
  std::size_t m = 0;
  std::size_t m0 = 0;
  double rho = 0.0;
  double tau = 2.0;
  std::uint64_t seed = 0;
  std::size_t replicates = 10000;
  std::string metric = "fdr";
};

multest::Pi0Estimator parse_estimator(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) {
    throw InputError("estimator must look like storey:<lambda>, "
                     "quantile:<k0> or constant:<f>");
  }
  const std::string kind = spec.substr(0, colon);
  const auto value = parse_double(spec.substr(colon + 1));
  if (!value) throw InputError("estimator parameter is not a number");
  try {
    if (kind == "storey") return multest::Pi0Estimator::storey(*value);
    if (kind == "quantile") {
      return multest::Pi0Estimator::quantile(static_cast<int>(*value));
    }
    if (kind == "constant") return multest::Pi0Estimator::constant(*value);
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("estimator: ") + e.what());
  }
  throw InputError("unknown estimator kind '" + kind + "'");
}

multest::Procedure build_procedure(const RunConfig& cfg) {
  const std::string& id = cfg.procedure;
  const double alpha = cfg.alpha;
  const double gamma = cfg.gamma;
  const int k = cfg.k;
  if (id == "none") {
    return [](const multest::PValueFamily&) { return multest::RejectionSet{}; };
  }
  if (id == "uncorrected") {
    return [alpha](const multest::PValueFamily& p) {
      return multest::threshold_rejections(p, alpha);
    };
  }
  if (id == "bonferroni") {
    return [alpha, k](const multest::PValueFamily& p) {
      return multest::bonferroni_family(
          multest::full_index_set(p.size()), k, alpha, p);
    };
  }
  if (id == "bh") {
    return [alpha](const multest::PValueFamily& p) {
      return multest::linear_step_up(p, alpha);
    };
  }
  if (id == "by") {
    return [alpha](const multest::PValueFamily& p) {
      return multest::benjamini_yekutieli(p, alpha);
    };
  }
  if (id == "adaptive") {
    if (cfg.estimator.empty()) {
      throw InputError("procedure 'adaptive' requires --estimator");
    }
    const multest::Pi0Estimator est = parse_estimator(cfg.estimator);
    return [alpha, est](const multest::PValueFamily& p) {
      return multest::adaptive_step_up(p, alpha, est);
    };
  }
  if (id == "one-stage") {
    multest::RejectionCurve curve;
    curve.alpha = alpha;
    if (cfg.curve == "br") {
      curve.kind = multest::RejectionCurve::Kind::blanchard_roquain;
    } else if (cfg.curve == "aorc") {
      curve.kind = multest::RejectionCurve::Kind::aorc;
    } else {
      throw InputError("procedure 'one-stage' requires --curve br|aorc");
    }
    return [curve](const multest::PValueFamily& p) {
      return multest::one_stage_step_up(p, curve);
    };
  }
  if (id == "beta") {
    if (cfg.weights_path.empty()) {
      throw InputError("procedure 'beta' requires --weights");
    }
    const std::vector<double> nu = read_column(cfg.weights_path, false);
    multest::BetaWeights weights{nu};
    return [alpha, weights](const multest::PValueFamily& p) {
      return multest::beta_step_up(p, alpha, weights);
    };
  }
  if (id == "holm") {
    return [alpha](const multest::PValueFamily& p) {
      return multest::holm(p, alpha);
    };
  }
  if (id == "generalized-holm") {
    return [alpha, k](const multest::PValueFamily& p) {
      return multest::generalized_holm(p, alpha, k);
    };
  }
  if (id == "lehmann-romano") {
    return [gamma, alpha](const multest::PValueFamily& p) {
      return multest::lehmann_romano(p, gamma, alpha);
    };
  }
  if (id == "quantile-binomial") {
    return [gamma, alpha](const multest::PValueFamily& p) {
      return multest::quantile_binomial(p, gamma, alpha);
    };
  }
  throw InputError("unknown procedure '" + id + "'");
}

bool procedure_uses_gamma(const std::string& id) {
  return id == "lehmann-romano" || id == "quantile-binomial";
}

bool procedure_uses_k(const std::string& id) {
  return id == "generalized-holm" || id == "bonferroni";
}

void write_text(const std::string& output_path, const std::string& text) {
  if (output_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(output_path);
  if (!out) throw InputError(output_path + ": cannot open for writing");
  out << text;
}

int run_reject(const RunConfig& cfg) {
  if (cfg.input_path.empty()) throw InputError("reject requires --input");
  const multest::PValueFamily family{read_column(cfg.input_path, true)};
  const multest::Procedure procedure = build_procedure(cfg);
  const multest::RejectionSet result = procedure(family);

  json record;
  record["procedure"] = cfg.procedure;
  record["m"] = family.size();
  if (cfg.procedure != "none") record["alpha"] = cfg.alpha;
  if (procedure_uses_gamma(cfg.procedure)) record["gamma"] = cfg.gamma;
  if (procedure_uses_k(cfg.procedure)) record["k"] = cfg.k;
  if (cfg.procedure == "adaptive") record["estimator"] = cfg.estimator;
  if (cfg.procedure == "one-stage") record["curve"] = cfg.curve;
  if (cfg.procedure == "beta") record["weights"] = cfg.weights_path;
  if (result.threshold) record["threshold"] = *result.threshold;
  if (result.warning) record["warning"] = *result.warning;
  record["rejected"] = result.indices;  // 0-based
  record["count"] = result.indices.size();
  write_text(cfg.output_path, record.dump() + "\n");
  return 0;
}

int run_aggregate(const RunConfig& cfg) {
  if (cfg.input_path.empty()) throw InputError("aggregate requires --input");
  const multest::PValueFamily family{read_column(cfg.input_path, true)};
  const double p = multest::aggregate_pvalues(family, cfg.gamma);
  json record;
  record["operation"] = "aggregate";
  record["gamma"] = cfg.gamma;
  record["m"] = family.size();
  record["p_value"] = p;
  write_text(cfg.output_path, record.dump() + "\n");
  return 0;
}

int run_thresholds(const RunConfig& cfg) {
  if (cfg.m < 2) throw InputError("thresholds requires --m >= 2");
  const multest::FdpParams params{cfg.gamma, cfg.alpha, cfg.m};
  const auto lr = multest::lr_thresholds(params);
  const auto qp = multest::hoeffding_bennett_thresholds(params);
  const auto q = multest::q_thresholds(params);
  const auto gav = multest::gavrilov_thresholds(cfg.m, cfg.gamma);
  std::ostringstream out;
  out << "l,t_lr,t_q_prime,t_q,t_bh,t_gavrilov\n";
  for (std::size_t l = 1; l <= cfg.m; ++l) {
    const double bh =
        cfg.gamma * static_cast<double>(l) / static_cast<double>(cfg.m);
    out << l << ',' << format_double(lr[l]) << ',' << format_double(qp[l])
        << ',' << format_double(q[l]) << ',' << format_double(bh) << ','
        << format_double(gav[l]) << '\n';
  }
  write_text(cfg.output_path, out.str());
  return 0;
}

int run_simulate(const RunConfig& cfg) {
  if (cfg.m < 2) throw InputError("simulate requires --m >= 2");
  if (cfg.m0 > cfg.m) throw InputError("--m0 must not exceed --m");
  if (cfg.replicates < 1) throw InputError("--replicates must be >= 1");

  multest::GaussianModel model;
  model.m = cfg.m;
  model.m0 = cfg.m0;
  model.rho = cfg.rho;
  model.tau = cfg.tau;
  model.seed = cfg.seed;

  multest::Metric metric;
  if (cfg.metric == "fdr") {
    metric = multest::Metric::fdr();
  } else if (cfg.metric == "kfwer") {
    metric = multest::Metric::kfwer(cfg.k);
  } else if (cfg.metric == "fdp-tail") {
    metric = multest::Metric::fdp_tail(cfg.gamma);
  } else {
    throw InputError("unknown metric '" + cfg.metric + "'");
  }

  const multest::Procedure procedure = build_procedure(cfg);
  const multest::ErrorRateEstimate est = multest::estimate(
      procedure, metric, multest::make_generator(model), cfg.replicates);

  const bool uses_gamma = procedure_uses_gamma(cfg.procedure) ||
                          cfg.metric == "fdp-tail";
  const bool uses_k = procedure_uses_k(cfg.procedure) || cfg.metric == "kfwer";
  std::ostringstream out;
  out << "procedure,m,m0,rho,tau,alpha,gamma,k,N,metric,estimate,std_error\n";
  out << cfg.procedure << ',' << cfg.m << ',' << cfg.m0 << ','
      << format_double(cfg.rho) << ',' << format_double(cfg.tau) << ','
      << (cfg.procedure == "none" ? "" : format_double(cfg.alpha)) << ','
      << (uses_gamma ? format_double(cfg.gamma) : "") << ','
      << (uses_k ? std::to_string(cfg.k) : "") << ',' << cfg.replicates << ','
      << cfg.metric << ',' << format_double(est.estimate) << ','
      << format_double(est.std_error) << '\n';
  write_text(cfg.output_path, out.str());
  return 0;
}

}  // namespace

namespace {

int run(int argc, char** argv) {
  CLI::App app{"Multiple testing procedures with Monte Carlo error-rate "
               "verification"};
  app.require_subcommand(1);

  RunConfig cfg;
  auto add_common = [&cfg](CLI::App* cmd) {
    cmd->add_option("--procedure", cfg.procedure,
                    "none|uncorrected|bonferroni|bh|by|adaptive|one-stage|"
                    "beta|holm|generalized-holm|lehmann-romano|"
                    "quantile-binomial");
    cmd->add_option("--alpha", cfg.alpha, "target level in (0,1)");
    cmd->add_option("--gamma", cfg.gamma, "FDP exceedance fraction in (0,1)");
    cmd->add_option("--k", cfg.k, "false rejection count for k-FWER");
    cmd->add_option("--estimator", cfg.estimator,
                    "storey:<lambda> | quantile:<k0> | constant:<f>");
    cmd->add_option("--weights", cfg.weights_path,
                    "file of spending weights, one per line, summing to 1");
    cmd->add_option("--curve", cfg.curve, "br | aorc");
    cmd->add_option("--input", cfg.input_path,
                    "p-value file, one value per line (optional header)");
    cmd->add_option("--output", cfg.output_path, "output path (default stdout)");
  };

  CLI::App* reject = app.add_subcommand(
      "reject", "Apply a procedure to a p-value file");
  add_common(reject);

  CLI::App* aggregate = app.add_subcommand(
      "aggregate", "Combine a p-value file into one global p-value");
  add_common(aggregate);

  CLI::App* thresholds = app.add_subcommand(
      "thresholds", "Export FDP threshold curves as CSV");
  add_common(thresholds);
  thresholds->add_option("--m", cfg.m, "number of hypotheses");

  CLI::App* simulate = app.add_subcommand(
      "simulate", "Monte Carlo error-rate estimate under the Gaussian model");
  add_common(simulate);
  simulate->add_option("--m", cfg.m, "number of hypotheses");
  simulate->add_option("--m0", cfg.m0, "number of true nulls");
  simulate->add_option("--rho", cfg.rho, "equi-correlation in [0,1)");
  simulate->add_option("--tau", cfg.tau, "alternative mean shift");
  simulate->add_option("--seed", cfg.seed, "random seed");
  simulate->add_option("--replicates", cfg.replicates, "replicate count");
  simulate->add_option("--metric", cfg.metric, "fdr | kfwer | fdp-tail");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (reject->parsed()) return run_reject(cfg);
    if (aggregate->parsed()) return run_aggregate(cfg);
    if (thresholds->parsed()) return run_thresholds(cfg);
    if (simulate->parsed()) return run_simulate(cfg);
    std::cerr << "no subcommand given\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (...) {
    std::cerr << "internal error\n";
    return 1;
  }
}
