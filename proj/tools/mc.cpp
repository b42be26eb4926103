// mc: command-line front end for the maxcorr library.
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "maxcorr/closed_forms.hpp"
#include "maxcorr/discrete_core.hpp"
#include "maxcorr/error.hpp"
#include "maxcorr/estimators.hpp"
#include "maxcorr/io.hpp"
#include "maxcorr/stable_levy.hpp"
#include "maxcorr/subset_schemes.hpp"
#include "maxcorr/verify.hpp"

namespace {

using namespace maxcorr;
using io::json;

enum Exit { kOk = 0, kVerifyFailed = 1, kUsage = 2, kValidation = 3, kResource = 4 };

struct Globals {
  std::string output = "json";
  std::size_t cap = tol::kDefaultCellCap;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void emit(const Globals& g, const CorrelationReport& r) {
  if (g.output == "table") {
    std::cout << "value      " << fmt(r.value) << "\n"
              << "method     " << to_string(r.method) << "\n"
              << "tolerance  " << fmt(r.tolerance) << "\n";
    if (!r.spectrum.empty()) {
      std::cout << "spectrum  ";
      for (std::size_t i = 0; i < r.spectrum.size() && i < 8; ++i) std::cout << " " << fmt(r.spectrum[i]);
      if (r.spectrum.size() > 8) std::cout << " ...";
      std::cout << "\n";
    }
    for (const auto& [k, v] : r.notes) {
      std::cout << k << ": ";
      if (const auto* d = std::get_if<double>(&v)) std::cout << fmt(*d);
      else std::cout << std::get<std::string>(v);
      std::cout << "\n";
    }
  } else {
    std::cout << io::to_json(r).dump(2) << "\n";
  }
  if (isatty(STDERR_FILENO)) {
    std::cerr << "R = " << fmt(r.value) << " (" << to_string(r.method) << ")\n";
  }
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto v = parse_number(item);
    if (!v) throw Error(ErrorKind::ParseError, "'" + item + "' is not a number");
    out.push_back(*v);
  }
  return out;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("MC_SEED")) {
    char* end = nullptr;
    const auto v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0') return v;
    throw Error(ErrorKind::ParseError, "MC_SEED must be an unsigned integer");
  }
  return 0;
}

// Named flags for `mc formula`; --params supplies them positionally.
struct FormulaArgs {
  std::string name;
  std::map<std::string, double> values;
  std::string params;
  std::string p_list;
};

const std::map<std::string, std::vector<std::string>>& formula_params() {
  static const std::map<std::string, std::vector<std::string>> table{
      {"gaussian", {"rho"}},
      {"bernoulli", {"p-ac", "p-ad", "p-bc", "p-bd"}},
      {"dksy", {"l", "m", "n"}},
      {"mb", {}},
      {"nested", {"n", "m", "k"}},
      {"tag", {"a", "b"}},
      {"bdk", {"alpha", "lambda", "c-minus", "c-plus"}},
      {"marshall-olkin", {"l1", "l2", "l3"}},
      {"min-window", {"l", "m", "n"}},
      {"independent-rj", {"p-s", "p-t"}},
  };
  return table;
}

int as_int(double v, const std::string& name) {
  if (v != std::floor(v)) throw Error(ErrorKind::ParseError, "--" + name + " must be an integer");
  return static_cast<int>(v);
}

CorrelationReport run_formula(const FormulaArgs& args) {
  const auto& table = formula_params();
  const auto it = table.find(args.name);
  if (it == table.end()) throw Error(ErrorKind::ParseError, "unknown formula '" + args.name + "'");
  std::map<std::string, double> v = args.values;
  if (!args.params.empty()) {
    const auto list = parse_list(args.params);
    if (args.name == "mb") {
      v.clear();
    } else if (list.size() != it->second.size()) {
      throw Error(ErrorKind::ParseError, "--params needs " + std::to_string(it->second.size()) + " values");
    }
    for (std::size_t i = 0; i < it->second.size(); ++i) v[it->second[i]] = list[i];
  }
  for (const auto& key : it->second) {
    if (!v.count(key)) throw Error(ErrorKind::ParseError, "formula " + args.name + " needs --" + key);
  }
  const std::string& n = args.name;
  double value = 0.0;
  if (n == "gaussian") {
    value = closed_forms::gaussian_mc(v["rho"]);
  } else if (n == "bernoulli") {
    value = closed_forms::bernoulli_2x2_mc({v["p-ac"], v["p-ad"], v["p-bc"], v["p-bd"]});
  } else if (n == "dksy") {
    value = closed_forms::dksy_mc(as_int(v["l"], "l"), as_int(v["m"], "m"), as_int(v["n"], "n"));
  } else if (n == "mb") {
    const std::string& text = args.p_list.empty() ? args.params : args.p_list;
    if (text.empty()) throw Error(ErrorKind::ParseError, "formula mb needs --p");
    const auto p = parse_list(text);
    value = closed_forms::mb_bound(p);
  } else if (n == "nested") {
    value = closed_forms::nested_subsets_mc(as_int(v["n"], "n"), as_int(v["m"], "m"), as_int(v["k"], "k"));
  } else if (n == "tag") {
    value = closed_forms::uniform_nested_tag_mc(as_int(v["a"], "a"), as_int(v["b"], "b"));
  } else if (n == "bdk") {
    value = closed_forms::bdk_mc(v["alpha"], v["lambda"], v["c-minus"], v["c-plus"]);
  } else if (n == "marshall-olkin") {
    value = closed_forms::marshall_olkin_mc(v["l1"], v["l2"], v["l3"]);
  } else if (n == "min-window") {
    value = closed_forms::min_window_bound(as_int(v["l"], "l"), as_int(v["m"], "m"), as_int(v["n"], "n"));
  } else {
    value = closed_forms::independent_rj(v["p-s"], v["p-t"]);
  }
  auto report = closed_form_report(value);
  report.notes["formula"] = n;
  return report;
}

// "bdk(lambda,c_minus,c_plus)" or a JSON file.
stable_levy::SpectralMeasure load_tau(const std::string& spec, double alpha) {
  if (spec.rfind("bdk(", 0) == 0 && spec.back() == ')') {
    const auto args = parse_list(spec.substr(4, spec.size() - 5));
    if (args.size() != 3) throw Error(ErrorKind::ParseError, "bdk(...) takes lambda,c_minus,c_plus");
    return stable_levy::bdk_tau(alpha, args[0], args[1], args[2]);
  }
  return io::measure_from_json(io::read_file(spec));
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError: return kUsage;
    case ErrorKind::SizeOverflow: return kResource;
    default: return kValidation;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maximal correlation toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--output", g.output, "Output format")->check(CLI::IsMember({"json", "table"}));
  app.add_option("--cap", g.cap, "State-space cap in cells");

  std::string discrete_path;
  auto* discrete = app.add_subcommand("discrete", "Exact R of a finite joint given as JSON");
  discrete->add_option("input", discrete_path, "Joint JSON file")->required();

  FormulaArgs fa;
  auto* formula = app.add_subcommand("formula", "Closed-form identities");
  formula->add_option("name", fa.name, "gaussian, bernoulli, dksy, mb, nested, tag, bdk, marshall-olkin, "
                                       "min-window, independent-rj")
      ->required();
  std::map<std::string, std::optional<double>> formula_flags;
  for (const auto& [name, keys] : formula_params())
    for (const auto& k : keys) formula_flags.emplace(k, std::nullopt);
  for (auto& [k, v] : formula_flags) formula->add_option("--" + k, v);
  formula->add_option("--p", fa.p_list, "Comma-separated P(i in T) for mb");
  formula->add_option("--params", fa.params, "Comma-separated values in the formula's order");

  double alpha = 1.0;
  std::string tau_spec;
  auto* stable = app.add_subcommand("stable", "Op(nu) of a stable law from its spectral measure");
  stable->add_option("--alpha", alpha, "Stability index in (0,2)")->required();
  stable->add_option("--tau", tau_spec, "JSON file or bdk(lambda,c_minus,c_plus)")->required();

  std::string triple_path;
  auto* levy = app.add_subcommand("levy", "Whole-path R of a two-dimensional Levy process");
  levy->add_option("--triple", triple_path, "Levy triple JSON file")->required();

  std::string scheme_path, nested_spec;
  bool brute = false;
  double bern_p = 0.5;
  auto* subsets_cmd = app.add_subcommand("subsets", "Random subset schemes");
  auto* scheme_opt = subsets_cmd->add_option("--scheme", scheme_path, "Scheme JSON file");
  auto* nested_opt = subsets_cmd->add_option("--nested", nested_spec, "n,m,k for uniform nested subsets");
  scheme_opt->excludes(nested_opt);
  subsets_cmd->add_flag("--brute-force", brute, "Also build the brute-force joint");
  subsets_cmd->add_option("--bernoulli", bern_p, "Coordinate law for the brute-force oracle");

  std::string sampler, sampler_params, input_csv, samples_out, increments_path;
  std::size_t count = 100000;
  std::optional<std::uint64_t> seed;
  int bins = 20, steps = 1;
  std::optional<int> bins_y;
  auto* estimate = app.add_subcommand("estimate", "Binned-sample estimate of R");
  estimate->add_option("--sampler", sampler, "bivariate_gaussian, marshall_olkin, random_walk_pair, stable_cms");
  estimate->add_option("--params", sampler_params, "Sampler parameters, comma-separated");
  estimate->add_option("--increments", increments_path, "Increment joint JSON for random_walk_pair");
  estimate->add_option("--steps", steps, "Walk length for random_walk_pair");
  estimate->add_option("--count", count, "Number of draws");
  estimate->add_option("--seed", seed, "Seed (default MC_SEED or 0)");
  estimate->add_option("--bins", bins, "Bins per axis");
  estimate->add_option("--bins-y", bins_y, "Bins on the y axis");
  estimate->add_option("--input", input_csv, "Read x,y pairs from CSV instead of sampling");
  estimate->add_option("--write-samples", samples_out, "Write the batch as CSV");

  std::string family = "skellam", levels_text = "2,4,6,8,10";
  double rate = 1.0, rho = 0.5;
  auto* ladder = app.add_subcommand("ladder", "Censoring or binning ladder");
  ladder->add_option("--family", family)->check(CLI::IsMember({"skellam", "gaussian", "gauss-poisson"}));
  ladder->add_option("--rate", rate);
  ladder->add_option("--rho", rho);
  ladder->add_option("--levels", levels_text);

  std::string suite;
  auto* verify = app.add_subcommand("verify", "Run the acceptance cases");
  verify->add_option("suite", suite, "paper-core, stable, subsets, estimators, all")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*discrete) {
      emit(g, max_corr(io::joint_from_json(io::read_file(discrete_path))));
    } else if (*formula) {
      for (const auto& [k, v] : formula_flags)
        if (v) fa.values[k] = *v;
      emit(g, run_formula(fa));
    } else if (*stable) {
      emit(g, stable_levy::opnu_stable(load_tau(tau_spec, alpha), alpha));
    } else if (*levy) {
      emit(g, stable_levy::levy_mc(io::triple_from_json(io::read_file(triple_path))));
    } else if (*subsets_cmd) {
      if (scheme_path.empty() && nested_spec.empty()) {
        throw Error(ErrorKind::ParseError, "subsets needs --scheme or --nested");
      }
      if (!nested_spec.empty()) {
        const auto nmk = parse_list(nested_spec);
        if (nmk.size() != 3) throw Error(ErrorKind::ParseError, "--nested takes n,m,k");
        const int n = as_int(nmk[0], "nested"), m = as_int(nmk[1], "nested"), k = as_int(nmk[2], "nested");
        const double closed = closed_forms::nested_subsets_mc(n, m, k);
        CorrelationReport report = closed_form_report(closed);
        if (brute) {
          const auto svd = subsets::subset_pair_mc(subsets::uniform_nested(n, m, k));
          report.notes["brute_force"] = svd.value;
          report.notes["difference"] = std::abs(svd.value - closed);
          report.spectrum = svd.spectrum;
        }
        emit(g, report);
      } else {
        const auto scheme = io::scheme_from_json(io::read_file(scheme_path));
        CorrelationReport report = subsets::subsample_mc(scheme);
        if (brute) {
          const std::vector<subsets::FiniteLaw> laws(static_cast<std::size_t>(scheme.n()),
                                                     subsets::FiniteLaw{1.0 - bern_p, bern_p});
          const double v = max_corr(subsets::brute_force_subvector_joint(scheme, laws, g.cap)).value;
          report.notes["brute_force"] = v;
          report.notes["difference"] = std::abs(v - report.value);
        }
        emit(g, report);
      }
    } else if (*estimate) {
      estimators::SampleBatch batch;
      if (!input_csv.empty()) {
        std::ifstream in(input_csv);
        if (!in) throw Error(ErrorKind::ParseError, "cannot open " + input_csv);
        batch.pairs = estimators::read_csv(in);
        batch.generator = "csv";
      } else {
        const auto p = sampler_params.empty() ? std::vector<double>{} : parse_list(sampler_params);
        auto need = [&](std::size_t k) {
          if (p.size() != k) {
            throw Error(ErrorKind::ParseError, sampler + " takes " + std::to_string(k) + " parameters");
          }
        };
        estimators::SamplerTag tag;
        if (sampler == "bivariate_gaussian") {
          need(1);
          tag = estimators::BivariateGaussian{p[0]};
        } else if (sampler == "marshall_olkin") {
          need(3);
          tag = estimators::MarshallOlkin{p[0], p[1], p[2]};
        } else if (sampler == "stable_cms") {
          need(3);
          tag = estimators::StableCms{p[0], p[1], p[2]};
        } else if (sampler == "random_walk_pair") {
          if (increments_path.empty()) throw Error(ErrorKind::ParseError, "random_walk_pair needs --increments");
          tag = estimators::RandomWalkPair{io::joint_from_json(io::read_file(increments_path)), steps};
        } else {
          throw Error(ErrorKind::ParseError, "unknown sampler '" + sampler + "'");
        }
        batch = estimators::sample(tag, count, seed ? *seed : default_seed());
      }
      if (!samples_out.empty()) {
        std::ofstream out(samples_out);
        estimators::write_csv(out, batch);
      }
      emit(g, estimators::binned_empirical_mc(batch, bins, bins_y ? *bins_y : bins));
    } else if (*ladder) {
      std::vector<int> levels;
      for (double v : parse_list(levels_text)) levels.push_back(as_int(v, "levels"));
      const auto generator = family == "skellam"    ? estimators::skellam_family(rate)
                             : family == "gaussian" ? estimators::gaussian_binning_family(rho)
                                                    : estimators::gauss_poisson_family(rate);
      const auto result = estimators::truncation_ladder(generator, levels);
      if (result.reports.empty()) throw Error(ErrorKind::ParseError, "--levels is empty");
      CorrelationReport report = result.reports.back();
      report.notes["family"] = family;
      for (std::size_t i = 0; i < result.levels.size(); ++i) {
        const std::string key = std::to_string(result.levels[i]);
        report.notes["value_at_" + key] = result.reports[i].value;
        report.notes["tail_mass_at_" + key] = result.tail_mass[i];
      }
      emit(g, report);
    } else if (*verify) {
      const auto& names = verify::suite_names();
      if (std::find(names.begin(), names.end(), suite) == names.end()) {
        std::cerr << "unknown suite '" << suite << "'\n";
        return kUsage;
      }
      const auto result = verify::run_suite(suite);
      std::ostream& table_out = g.output == "table" ? std::cout : std::cerr;
      char line[512];
      for (const auto& c : result.cases) {
        std::snprintf(line, sizeof line, "%-4s %2d %-11s %-42s %-9s expected %-14.10g computed %-14.10g tol %.2g\n",
                      c.pass ? "ok" : "FAIL", c.criterion, c.suite.c_str(), c.id.c_str(), c.source.c_str(),
                      c.expected, c.computed, c.tolerance);
        table_out << line;
      }
      table_out << result.passed << " passed, " << result.failed << " failed\n";
      if (g.output == "json") {
        json cases = json::array();
        for (const auto& c : result.cases) {
          cases.push_back({{"id", c.id}, {"criterion", c.criterion}, {"suite", c.suite},
                           {"source", c.source}, {"expected", c.expected}, {"computed", c.computed},
                           {"tolerance", c.tolerance}, {"pass", c.pass}});
        }
        std::cout << json{{"suite", suite}, {"passed", result.passed}, {"failed", result.failed},
                          {"cases", cases}}
                         .dump(2)
                  << "\n";
      }
      return result.failed == 0 ? kOk : kVerifyFailed;
    }
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  }
  return kOk;
}
