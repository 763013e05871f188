#include "cli.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "nscost/analytic.hpp"
#include "nscost/conic_json.hpp"
#include "nscost/programs.hpp"
#include "nscost/symmetry.hpp"

namespace nscost::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v == 0.0 ? 0.0 : v);
  return buf;
}

std::string fmt_csv(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10f", v == 0.0 ? 0.0 : v);
  return buf;
}

std::string fmt_int(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.0f", v);
  return buf;
}

struct ChannelSpec {
  std::string family = "depolarizing";
  int d = 2;
  double p = 0.0;
  std::string matrix;  // classical: rows separated by ';', entries by ','
  std::string choi;    // JSON file
};

void add_channel_options(CLI::App* app, ChannelSpec& spec, const std::string& prefix = "") {
  app->add_option("--" + prefix + "family", spec.family,
                  "depolarizing, amplitude_damping, dephasing, erasure, classical, identity, constant")
      ->capture_default_str();
  app->add_option("--" + prefix + "d", spec.d, "dimension")->capture_default_str();
  app->add_option(prefix.empty() ? "--p,--r" : "--" + prefix + "p", spec.p, "noise parameter")->capture_default_str();
  app->add_option("--" + prefix + "matrix", spec.matrix, "classical transition matrix N(y|x), e.g. \"0.8,0.2;0.2,0.8\"");
  app->add_option("--" + prefix + "choi", spec.choi, "JSON Choi file {dim_in, dim_out, re, im}");
}

RealMatrix parse_matrix(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::stringstream rs(text);
  std::string row;
  while (std::getline(rs, row, ';')) {
    std::vector<double> vals;
    std::stringstream cs(row);
    std::string cell;
    while (std::getline(cs, cell, ',')) {
      try {
        std::size_t used = 0;
        vals.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw UsageError("malformed matrix entry: '" + cell + "'");
      }
    }
    rows.push_back(std::move(vals));
  }
  if (rows.empty() || rows[0].empty()) throw UsageError("empty matrix");
  RealMatrix m(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) throw UsageError("matrix rows have different lengths");
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

ComplexMatrix read_json_matrix(const nlohmann::json& j, int n, const char* name) {
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  if (j.is_null()) return out;
  std::vector<double> flat;
  if (j.is_array() && !j.empty() && j[0].is_array()) {
    for (const auto& row : j) {
      if (static_cast<int>(row.size()) != n) throw UsageError(std::string("Choi file: wrong row length in ") + name);
      for (const auto& v : row) flat.push_back(v.get<double>());
    }
  } else {
    flat = j.get<std::vector<double>>();
  }
  if (static_cast<int>(flat.size()) != n * n) throw UsageError(std::string("Choi file: wrong size of ") + name);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) out(r, c) = flat[r * n + c];
  }
  return out;
}

QuantumChannel read_choi_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open Choi file " + path);
  try {
    const auto doc = nlohmann::json::parse(in);
    const int din = doc.at("dim_in").get<int>();
    const int dout = doc.at("dim_out").get<int>();
    if (din < 1 || dout < 1) throw UsageError("Choi file: dimensions must be positive");
    const int n = din * dout;
    ComplexMatrix choi = read_json_matrix(doc.at("re"), n, "re");
    choi += Complex(0.0, 1.0) * read_json_matrix(doc.value("im", nlohmann::json()), n, "im");
    return QuantumChannel(din, dout, choi);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("malformed Choi file: ") + e.what());
  }
}

QuantumChannel make(const ChannelSpec& spec) {
  if (!spec.choi.empty()) return read_choi_file(spec.choi);
  const ChannelFamily fam = parse_family(spec.family);
  ChannelParams params;
  params.d = spec.d;
  params.p = spec.p;
  if (fam == ChannelFamily::classical) {
    if (spec.matrix.empty()) throw UsageError("classical channel needs --matrix");
    params.stochastic = parse_matrix(spec.matrix);
  }
  return make_channel(fam, params);
}

struct Globals {
  double gap_tol = 1e-8;
  double feas_tol = 1e-8;
  int max_iter = 200;
  std::string dump_problem;
  int jobs = 1;
  std::string out;
};

class ProblemDumper {
 public:
  explicit ProblemDumper(std::string path) : path_(std::move(path)) {}
  void operator()(const conic::ConicProblem& p) {
    std::lock_guard lock(mu_);
    std::string target = path_;
    if (count_ > 0) target += "." + std::to_string(count_);
    ++count_;
    conic::write_json(p, target);
  }

 private:
  std::string path_;
  int count_ = 0;
  std::mutex mu_;
};

SolveSettings settings_from(const Globals& g, const std::shared_ptr<ProblemDumper>& dumper) {
  if (!(g.gap_tol > 0.0) || !(g.feas_tol > 0.0) || g.max_iter < 1) {
    throw UsageError("tolerances must be positive and --max-iter at least 1");
  }
  SolveSettings s;
  s.solver.gap_tol = g.gap_tol;
  s.solver.feas_tol = g.feas_tol;
  s.solver.max_iter = g.max_iter;
  s.solver.keep_history = false;
  if (dumper) s.problem_hook = [dumper](const conic::ConicProblem& p) { (*dumper)(p); };
  return s;
}

void check_eps(double eps) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw UsageError("eps values must lie in [0, 1]");
}

// Output rows are computed in parallel but written in index order.
void parallel_for(int count, int jobs, const std::function<void(int)>& body) {
  jobs = std::max(1, std::min(jobs, count));
  if (jobs == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(mu);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path);
  f << content;
  f.close();
  if (!f) {
    std::error_code ec;
    std::filesystem::remove(path, ec);
    throw UsageError("failed writing " + path);
  }
}

std::string cost_line(const CostResult& c) {
  return "tr_v=" + fmt(c.tr_v_opt) + " m_star=" + fmt_int(c.m_star) + " cost_bits=" + fmt(c.cost_bits) +
         " half_log_trv=" + fmt(c.half_log_trv) + " delta=" + fmt(c.delta);
}

int default_jobs() {
  if (const char* env = std::getenv("NSCOST_JOBS")) {
    try {
      const int j = std::stoi(env);
      if (j >= 1) return j;
    } catch (const std::exception&) {
    }
  }
  return 1;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"No-signalling assisted quantum channel simulation costs", "nscost"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  g.jobs = default_jobs();
  app.add_option("--gap-tol", g.gap_tol, "relative duality gap tolerance")->capture_default_str();
  app.add_option("--feas-tol", g.feas_tol, "relative feasibility tolerance")->capture_default_str();
  app.add_option("--max-iter", g.max_iter, "interior-point iteration limit")->capture_default_str();
  app.add_option("--dump-problem", g.dump_problem, "write each conic problem as JSON to this path");
  app.add_option("--jobs", g.jobs, "worker threads for sweeps (default: NSCOST_JOBS or 1)");
  app.add_option("--out", g.out, "output file (CSV for sweeps and figures)");

  ChannelSpec chan;
  double eps = 0.0;
  std::string code = "ns";
  auto* cost = app.add_subcommand("cost", "one-shot eps-error simulation cost");
  add_channel_options(cost, chan);
  cost->add_option("--eps", eps, "error tolerance")->capture_default_str();
  cost->add_option("--code", code, "ns or ns_ppt")->capture_default_str();

  auto* zero = app.add_subcommand("zero-error", "zero-error cost with its certificate gap");
  add_channel_options(zero, chan);

  auto* maxinfo = app.add_subcommand("maxinfo", "channel (smooth) max-information and robustness");
  add_channel_options(maxinfo, chan);
  maxinfo->add_option("--eps", eps, "smoothing parameter")->capture_default_str();

  ChannelSpec chan_a, chan_b;
  auto* diamond = app.add_subcommand("diamond", "half diamond-norm distance of two channels");
  add_channel_options(diamond, chan_a, "a-");
  add_channel_options(diamond, chan_b, "b-");
  std::string fam_a, fam_b;
  diamond->add_option("--a", fam_a, "family of the first channel");
  diamond->add_option("--b", fam_b, "family of the second channel");
  int diamond_d = 0;
  diamond->add_option("--d", diamond_d, "dimension of both channels");

  auto* classical_lp = app.add_subcommand("classical-lp", "classical channel cost by linear program");
  std::string matrix;
  classical_lp->add_option("--matrix", matrix, "transition matrix N(y|x), rows separated by ';'")->required();
  classical_lp->add_option("--eps", eps, "error tolerance")->capture_default_str();

  int d = 2;
  double p = 0.15;
  std::vector<double> eps_list;
  int n_min = 1, n_max = 300;
  auto* scan = app.add_subcommand("depol-scan", "n-fold depolarizing cost by linear program");
  scan->add_option("--d", d, "dimension")->capture_default_str();
  scan->add_option("--p", p, "depolarizing parameter")->capture_default_str();
  scan->add_option("--eps", eps_list, "error tolerances")->delimiter(',');
  scan->add_option("--n-min", n_min, "first blocklength")->capture_default_str();
  scan->add_option("--n-max", n_max, "last blocklength")->capture_default_str();

  auto* fig2 = app.add_subcommand("figure2", "per-use cost of the n-fold depolarizing channel (CSV)");
  fig2->add_option("--d", d, "dimension")->capture_default_str();
  fig2->add_option("--p", p, "depolarizing parameter")->capture_default_str();
  fig2->add_option("--eps", eps_list, "error tolerances (default 5e-4,5e-3,5e-2)")->delimiter(',');
  fig2->add_option("--n-max", n_max, "last blocklength")->capture_default_str();

  int grid = 101;
  auto* fig3 = app.add_subcommand("figure3", "zero-error cost of four channel families (CSV)");
  fig3->add_option("--d", d, "dimension")->capture_default_str();
  fig3->add_option("--grid", grid, "number of parameter points on [0, 1]")->capture_default_str();

  auto* verify = app.add_subcommand("verify", "check the explicit certificate of a channel family");
  add_channel_options(verify, chan);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    std::shared_ptr<ProblemDumper> dumper;
    if (!g.dump_problem.empty()) dumper = std::make_shared<ProblemDumper>(g.dump_problem);
    const SolveSettings settings = settings_from(g, dumper);
    std::string summary;
    std::string file_content;

    if (cost->parsed()) {
      check_eps(eps);
      const QuantumChannel ch = make(chan);
      if (code == "ns") {
        summary = cost_line(one_shot_cost_ns(ch, eps, settings));
      } else if (code == "ns_ppt") {
        summary = cost_line(one_shot_cost_ns_ppt(ch, eps, settings));
      } else {
        throw UsageError("--code must be ns or ns_ppt");
      }
    } else if (zero->parsed()) {
      const QuantumChannel ch = make(chan);
      const auto z = zero_error_cost(ch, settings);
      const auto check = verify_certificate(ch, z.certificate);
      summary = cost_line(z.cost) + " dual=" + fmt(check.dual_value);
    } else if (maxinfo->parsed()) {
      check_eps(eps);
      const QuantumChannel ch = make(chan);
      const double imax = eps == 0.0 ? max_information(ch, settings) : smooth_max_information(ch, eps, settings);
      summary = "i_max=" + fmt(imax) + " robustness=" + fmt(std::exp2(imax) - 1.0);
    } else if (diamond->parsed()) {
      if (!fam_a.empty()) chan_a.family = fam_a;
      if (!fam_b.empty()) chan_b.family = fam_b;
      if (diamond_d > 0) chan_a.d = chan_b.d = diamond_d;
      summary = "distance=" + fmt(diamond_norm_dist(make(chan_a), make(chan_b), settings));
    } else if (classical_lp->parsed()) {
      check_eps(eps);
      summary = cost_line(classical_cost_lp(parse_matrix(matrix), eps, settings));
    } else if (scan->parsed() || fig2->parsed()) {
      const bool figure = fig2->parsed();
      if (eps_list.empty()) {
        eps_list = figure ? std::vector<double>{5e-4, 5e-3, 5e-2} : std::vector<double>{0.0};
      }
      for (double e : eps_list) check_eps(e);
      if (figure) {
        n_min = 1;
        if (!(p > 0.0 && p < 1.0)) throw UsageError("figure2 needs p in (0, 1)");
      }
      if (n_min < 1 || n_max < n_min) throw UsageError("blocklength range is empty");
      const int count_n = n_max - n_min + 1;
      const int rows = count_n * static_cast<int>(eps_list.size());
      std::vector<DepolarizingCost> results(rows);
      parallel_for(rows, g.jobs, [&](int i) {
        results[i] = depolarizing_cost_lp(n_min + i % count_n, d, p, eps_list[i / count_n], settings);
      });
      const double qe = depolarizing_mutual_info(d, p).q_e;
      std::ostringstream csv;
      csv << "n,eps,cost_total_bits,cost_per_use,unceiled_per_use" << (figure ? ",qe_asymptote" : "") << "\n";
      for (int i = 0; i < rows; ++i) {
        csv << (n_min + i % count_n) << ',' << eps_list[i / count_n] << ',' << fmt_csv(results[i].total.cost_bits)
            << ',' << fmt_csv(results[i].cost_per_use) << ',' << fmt_csv(results[i].unceiled_per_use);
        if (figure) csv << ',' << fmt_csv(qe);
        csv << "\n";
      }
      file_content = csv.str();
      const auto& last = results.back();
      summary = "rows=" + std::to_string(rows) + " last_n=" + std::to_string(n_max) +
                " last_unceiled_per_use=" + fmt(last.unceiled_per_use) + " qe_asymptote=" + fmt(qe);
    } else if (fig3->parsed()) {
      if (grid < 2) throw UsageError("--grid must be at least 2");
      const std::vector<ChannelFamily> families{ChannelFamily::depolarizing, ChannelFamily::erasure,
                                                ChannelFamily::amplitude_damping, ChannelFamily::dephasing};
      const int rows = grid * static_cast<int>(families.size());
      std::vector<double> values(rows);
      parallel_for(rows, g.jobs, [&](int i) {
        const auto fam = families[i / grid];
        const double param = static_cast<double>(i % grid) / (grid - 1);
        ChannelParams cp;
        cp.d = (fam == ChannelFamily::amplitude_damping || fam == ChannelFamily::dephasing) ? 2 : d;
        cp.p = param;
        values[i] = zero_error_cost(make_channel(fam, cp), settings).cost.half_log_trv;
      });
      std::ostringstream csv;
      csv << "family,param,cost_bits\n";
      for (int i = 0; i < rows; ++i) {
        csv << to_string(families[i / grid]) << ',' << fmt_csv(static_cast<double>(i % grid) / (grid - 1)) << ','
            << fmt_csv(values[i]) << "\n";
      }
      file_content = csv.str();
      summary = "rows=" + std::to_string(rows) + " families=4 grid=" + std::to_string(grid);
    } else if (verify->parsed()) {
      const QuantumChannel ch = make(chan);
      const auto fam = parse_family(chan.family);
      const auto check = verify_certificate(ch, certificate(fam, chan.p, chan.d));
      summary = "outcome=" + std::string(to_string(check.outcome)) + " primal=" + fmt(check.primal_value) +
                " dual=" + fmt(check.dual_value) + " gap=" + fmt(check.gap);
    }

    if (!file_content.empty()) {
      if (g.out.empty()) {
        out << file_content;
      } else {
        write_file(g.out, file_content);
      }
    } else if (!g.out.empty()) {
      write_file(g.out, summary + "\n");
    }
    out << summary << "\n";
    return kExitOk;
  } catch (const SolverFailure& e) {
    err << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace nscost::cli
