// npsl command-line front end: lognorm, slemma, certify, validate, repro.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "npsl/commands.hpp"
#include "npsl/error.hpp"

namespace {

struct Flags {
  std::string input;
  std::string cert;
  std::string job;
  std::optional<std::string> p;
  std::optional<std::string> weight;
  std::optional<std::string> paths;
  std::optional<std::string> rate_search;
  std::optional<std::string> cert_out;
  std::optional<double> tol;
  std::optional<double> min_rate;
  std::optional<double> horizon;
  std::optional<double> dt;
  std::optional<int> trials;
  std::optional<int> suite_size;
  std::optional<std::uint64_t> seed;
  bool pretty = false;
  bool show_config = false;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--job", f.job, "JSON job file (settings, \"input\", \"cert\")");
  sub->add_option("--tol", f.tol, "tolerance");
  sub->add_option("--seed", f.seed, "random seed");
  sub->add_flag("--pretty", f.pretty, "aligned text instead of JSON");
  sub->add_flag("--show-config", f.show_config, "print the effective settings and exit");
}

npsl::Json split_list(const std::string& s) {
  npsl::Json out = npsl::Json::array();
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t end = s.find(',', start);
    out.push_back(s.substr(start, end == std::string::npos ? std::string::npos : end - start));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return out;
}

npsl::Json overrides(const std::string& command, const Flags& f) {
  npsl::Json o = npsl::Json::object();
  if (f.p) {
    npsl::Json ps = npsl::Json::array();
    for (double p : npsl::parse_p_list(*f.p)) ps.push_back(npsl::number_to_json(p));
    o["p"] = command == "certify" ? ps : ps.front();
  }
  if (f.weight) o["weight"] = *f.weight;
  if (f.paths) o["paths"] = split_list(*f.paths);
  if (f.rate_search) {
    npsl::require(*f.rate_search == "on" || *f.rate_search == "off" || *f.rate_search == "true" ||
                      *f.rate_search == "false",
                  npsl::ErrorCode::invalid_argument, "--rate-search expects on|off");
    o["rate_search"] = *f.rate_search == "on" || *f.rate_search == "true";
  }
  if (f.cert_out) o["cert_out"] = *f.cert_out;
  if (f.tol) o["tol"] = *f.tol;
  if (f.min_rate) o["min_rate"] = *f.min_rate;
  if (f.horizon) o["T"] = *f.horizon;
  if (f.dt) o["dt"] = *f.dt;
  if (f.trials) o["trials"] = *f.trials;
  if (f.suite_size) o["suite_size"] = *f.suite_size;
  if (f.seed) o["seed"] = *f.seed;
  return o;
}

// Paths inside a job file are relative to the job file.
std::string relative_to(const std::string& job, const std::string& path) {
  if (path.empty() || std::filesystem::path(path).is_absolute()) return path;
  return (std::filesystem::path(job).parent_path() / path).string();
}

void emit(const npsl::Json& report, bool pretty) {
  if (pretty)
    std::cout << npsl::render_text(report);
  else
    std::cout << report.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted non-Euclidean S-Lemma and Lur'e certification toolkit"};
  app.require_subcommand(1);
  Flags f;

  auto* lognorm = app.add_subcommand("lognorm", "log norm of a matrix in a weighted ℓp norm");
  lognorm->add_option("file", f.input, "matrix JSON");
  lognorm->add_option("--p", f.p, "1, 2, inf or any p ≥ 1");
  lognorm->add_option("--weight", f.weight, "identity | perron | diag:r1,r2,... | json:file");
  add_common(lognorm, f);

  auto* slemma = app.add_subcommand("slemma", "primal/dual S-Lemma problems for a form family");
  slemma->add_option("file", f.input, "family JSON");
  add_common(slemma, f);

  auto* certify = app.add_subcommand("certify", "absolute stability / contractivity certificates");
  certify->add_option("file", f.input, "system JSON");
  certify->add_option("--p", f.p, "comma list of p values, e.g. 1,2,inf");
  certify->add_option("--weight", f.weight, "identity | perron | diag:r1,r2,... | json:file");
  certify->add_option("--paths", f.paths, "comma list of metzler,lp_dual,l2_schur,l2_symmetrization,circle");
  certify->add_option("--rate-search", f.rate_search, "on|off: bisection for the largest certified rate");
  certify->add_option("--min-rate", f.min_rate, "smallest rate that counts as a certificate");
  certify->add_option("--cert-out", f.cert_out, "write the best certificate to this file");
  add_common(certify, f);

  auto* validate = app.add_subcommand("validate", "simulate in-class nonlinearities against a certificate");
  validate->add_option("file", f.input, "system JSON");
  validate->add_option("--cert", f.cert, "certificate JSON");
  validate->add_option("--T", f.horizon, "horizon");
  validate->add_option("--dt", f.dt, "RK4 step");
  validate->add_option("--trials", f.trials, "initial conditions per nonlinearity");
  add_common(validate, f);

  auto* repro = app.add_subcommand("repro", "regenerate the reference numbers from bundled inputs");
  repro->add_option("--suite-size", f.suite_size, "random instances per zero-gap suite");
  add_common(repro, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  npsl::Json config = npsl::Json::object();
  std::string input = f.input;
  std::string cert = f.cert;
  try {
    npsl::Json job = npsl::Json::object();
    if (!f.job.empty()) {
      job = npsl::load_json_file(f.job);
      npsl::require(job.is_object(), npsl::ErrorCode::parse, f.job + ": job file must be a JSON object");
      if (job.contains("command"))
        npsl::require(job["command"] == command, npsl::ErrorCode::invalid_argument,
                      f.job + ": job is for '" + job["command"].get<std::string>() + "'");
      if (input.empty() && job.contains("input")) input = relative_to(f.job, job["input"].get<std::string>());
      if (cert.empty() && job.contains("cert")) cert = relative_to(f.job, job["cert"].get<std::string>());
      job.erase("command");
      job.erase("input");
      job.erase("cert");
    }
    config = npsl::merge_config(npsl::merge_config(npsl::default_config(command), job, command),
                                overrides(command, f), command);
  } catch (const npsl::Error& e) {
    std::cerr << "npsl " << command << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "npsl " << command << ": " << e.what() << "\n";
    return 2;
  }

  if (f.show_config) {
    emit(config, f.pretty);
    return 0;
  }
  const npsl::CommandResult r = npsl::run_command(command, input, cert, config);
  emit(r.report, f.pretty);
  if (r.report.contains("error")) std::cerr << "npsl " << command << ": " << r.report["message"].get<std::string>() << "\n";
  return r.exit_code;
}
