// Command-line front end: generate / convert / solve / verify / bench.
// Exit codes: 0 success, 1 solver failure or timeout, 2 usage or parse error.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "dmdgp/bp.hpp"
#include "dmdgp/genio.hpp"
#include "dmdgp/realization.hpp"
#include "dmdgp/sbbu.hpp"

namespace fs = std::filesystem;

namespace {

std::uint64_t default_seed() {
  if (const char* env = std::getenv("DMDGP_SEED")) {
    std::uint64_t v = 0;
    auto res = std::from_chars(env, env + std::string_view(env).size(), v);
    if (res.ec == std::errc()) return v;
  }
  return 0;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw dmdgp::ParseError("cannot open " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw dmdgp::ParseError("cannot open " + path.string() + " for writing");
  }
  out << text;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

struct SolveOutcome {
  bool ok = false;
  bool ran = false;
  double time = 0.0;
  double mde = -1.0;
  std::uint64_t work = 0;
  std::uint64_t max_work = 0;
  std::string message;
};

SolveOutcome run_bp(const dmdgp::DmdgpInstance& g, double tol,
                    double time_limit, int repeats) {
  SolveOutcome out;
  out.ran = true;
  std::vector<double> times;
  dmdgp::BpResult result;
  for (int r = 0; r < repeats; ++r) {
    result = dmdgp::bp_solve(g, tol, dmdgp::BpLimits{0, time_limit});
    times.push_back(result.stats.wall_time);
    if (result.status != dmdgp::SolveStatus::success) break;
  }
  out.ok = result.status == dmdgp::SolveStatus::success;
  out.time = median(times);
  out.mde = result.mde;
  out.message = result.message;
  return out;
}

SolveOutcome run_sbbu(const dmdgp::DmdgpInstance& g, double tol, int repeats) {
  SolveOutcome out;
  out.ran = true;
  std::vector<double> times;
  dmdgp::SbbuResult result;
  dmdgp::SbbuOptions options;
  options.tolerance = tol;
  for (int r = 0; r < repeats; ++r) {
    result = dmdgp::sbbu_solve(g, options);
    times.push_back(result.stats.wall_time);
    if (result.status != dmdgp::SolveStatus::success) break;
  }
  out.ok = result.status == dmdgp::SolveStatus::success;
  out.time = median(times);
  out.mde = result.mde;
  out.work = result.stats.work;
  out.max_work = result.stats.max_work;
  out.message = result.message;
  return out;
}

struct BenchRow {
  std::string id;
  int v = 0;
  std::size_t e = 0;
  SolveOutcome bp;
  SolveOutcome sbbu;
  std::string error;
};

void print_csv(std::ostream& os, const std::vector<BenchRow>& rows) {
  os << "instance,V,E,bp_time,bp_mde,sbbu_time,sbbu_mde,Wbar,W,speedup\n";
  for (const auto& row : rows) {
    os << row.id << ',' << row.v << ',' << row.e << ',';
    if (row.bp.ok) {
      os << row.bp.time << ',' << row.bp.mde << ',';
    } else {
      os << ",,";
    }
    if (row.sbbu.ok) {
      os << row.sbbu.time << ',' << row.sbbu.mde << ',' << row.sbbu.max_work
         << ',' << row.sbbu.work << ',';
    } else {
      os << ",,,,";
    }
    if (row.bp.ok && row.sbbu.ok && row.sbbu.time > 0.0) {
      os << row.bp.time / row.sbbu.time;
    }
    os << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discretizable molecular distance geometry solver suite"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Write a synthetic instance");
  int gen_n = 0;
  int gen_k = 3;
  double gen_cutoff = 0.0;
  std::uint64_t gen_seed = default_seed();
  std::string gen_out;
  gen->add_option("--n", gen_n, "number of vertices")->required();
  gen->add_option("--k", gen_k, "dimension")->capture_default_str();
  gen->add_option("--cutoff", gen_cutoff, "pruning-edge cutoff")->required();
  gen->add_option("--seed", gen_seed, "RNG seed (default: DMDGP_SEED or 0)");
  gen->add_option("-o,--output", gen_out, "instance file")->required();

  // convert
  auto* conv = app.add_subcommand("convert", "Build an instance from a PDB file");
  std::string conv_pdb;
  double conv_cutoff = 0.0;
  std::string conv_out;
  conv->add_option("--pdb", conv_pdb, "PDB input file")->required();
  conv->add_option("--cutoff", conv_cutoff, "cutoff in Angstrom")->required();
  conv->add_option("-o,--output", conv_out, "instance file")->required();

  // solve
  auto* solve = app.add_subcommand("solve", "Solve an instance");
  std::string solve_algo;
  double solve_tol = 1e-4;
  double solve_time_limit = 0.0;
  std::uint64_t solve_node_limit = 0;
  bool solve_trace = false;
  int solve_repeats = 1;
  std::string solve_out;
  std::string solve_file;
  solve->add_option("--algo", solve_algo, "bp or sbbu")
      ->required()
      ->check(CLI::IsMember({"bp", "sbbu"}));
  solve->add_option("--tol", solve_tol, "relative feasibility tolerance")
      ->capture_default_str();
  solve->add_option("--time-limit", solve_time_limit,
                    "wall-clock budget in seconds (bp; 0 = none)")
      ->capture_default_str();
  solve->add_option("--node-limit", solve_node_limit, "node budget (bp)");
  solve->add_flag("--trace", solve_trace, "print the per-edge trace (sbbu)");
  solve->add_option("--repeats", solve_repeats, "timing repetitions")
      ->capture_default_str();
  solve->add_option("-o,--output", solve_out, "write the realization here");
  solve->add_option("file", solve_file, "instance file")->required();

  // verify
  auto* verify = app.add_subcommand("verify", "Recompute the MDE of a realization");
  std::string verify_instance;
  std::string verify_realization;
  verify->add_option("instance", verify_instance, "instance file")->required();
  verify->add_option("realization", verify_realization, "realization file")
      ->required();

  // bench
  auto* bench = app.add_subcommand("bench", "Run both solvers over a directory");
  std::string bench_dir;
  double bench_tol = 1e-4;
  int bench_repeats = 3;
  int bench_jobs = 1;
  double bench_time_limit = 300.0;
  std::string bench_out;
  std::string bench_hist;
  bench->add_option("--dir", bench_dir, "directory of .dmdgp instances")
      ->required();
  bench->add_option("--tol", bench_tol, "relative feasibility tolerance")
      ->capture_default_str();
  bench->add_option("--repeats", bench_repeats, "timing repetitions")
      ->capture_default_str();
  bench->add_option("--jobs", bench_jobs, "parallel workers")
      ->capture_default_str();
  bench->add_option("--time-limit", bench_time_limit,
                    "per-solve budget in seconds")
      ->capture_default_str();
  bench->add_option("-o,--output", bench_out, "report CSV")->required();
  bench->add_option("--hist", bench_hist,
                    "also dump per-edge |i-j| vs distance CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*gen) {
      auto synthetic =
          dmdgp::generate_synthetic(gen_n, gen_k, gen_cutoff, gen_seed);
      dmdgp::write_instance_file(synthetic.instance, gen_out);
      std::cout << "wrote " << gen_out << " (V=" << synthetic.instance.n()
                << ", E=" << synthetic.instance.edge_count() << ")\n";
      return 0;
    }

    if (*conv) {
      auto structure = dmdgp::parse_pdb(read_file(conv_pdb));
      auto built = dmdgp::build_instance(structure, conv_cutoff);
      for (const auto& w : structure.warnings) std::cerr << "warning: " << w << '\n';
      for (const auto& w : built.warnings) std::cerr << "warning: " << w << '\n';
      dmdgp::write_instance_file(built.instance, conv_out);
      std::cout << "wrote " << conv_out << " (V=" << built.instance.n()
                << ", E=" << built.instance.edge_count() << ")\n";
      return 0;
    }

    if (*solve) {
      auto g = dmdgp::read_instance_file(solve_file);
      std::cout << "algo: " << solve_algo << '\n';
      if (solve_algo == "bp") {
        std::vector<double> times;
        dmdgp::BpResult result;
        for (int r = 0; r < solve_repeats; ++r) {
          result = dmdgp::bp_solve(
              g, solve_tol, dmdgp::BpLimits{solve_node_limit, solve_time_limit});
          times.push_back(result.stats.wall_time);
          if (result.status != dmdgp::SolveStatus::success) break;
        }
        std::cout << "status: " << dmdgp::to_string(result.status) << '\n'
                  << "time_s: " << median(times) << '\n';
        if (result.status != dmdgp::SolveStatus::success) {
          std::cerr << "error: " << result.message << '\n';
          return 1;
        }
        std::cout << "mde: " << result.mde << '\n'
                  << "nodes: " << result.stats.nodes_expanded << '\n'
                  << "prunes: " << result.stats.prunes << '\n';
        if (!solve_out.empty()) {
          write_file(solve_out, dmdgp::write_realization(result.x));
        }
        return 0;
      }
      std::vector<double> times;
      dmdgp::SbbuResult result;
      dmdgp::SbbuOptions options;
      options.tolerance = solve_tol;
      for (int r = 0; r < solve_repeats; ++r) {
        result = dmdgp::sbbu_solve(g, options);
        times.push_back(result.stats.wall_time);
        if (result.status != dmdgp::SolveStatus::success) break;
      }
      std::cout << "status: " << dmdgp::to_string(result.status) << '\n'
                << "time_s: " << median(times) << '\n';
      if (result.status == dmdgp::SolveStatus::success) {
        std::cout << "mde: " << result.mde << '\n';
      }
      std::cout << "W: " << result.stats.work << '\n'
                << "Wbar: " << result.stats.max_work << '\n';
      for (const auto& entry : result.stats.trace) {
        if (entry.tie) {
          std::cerr << "warning: tie at the minimum residual on edge {"
                    << entry.i << "," << entry.j << "}\n";
        }
      }
      if (solve_trace) {
        std::cout << "trace: i,j,skipped,s_size,candidates,best_residual\n";
        for (const auto& entry : result.stats.trace) {
          std::cout << entry.i << ',' << entry.j << ',' << (entry.skipped ? 1 : 0)
                    << ',' << entry.s_size << ',' << entry.candidates << ','
                    << entry.residual << '\n';
        }
      }
      if (result.status != dmdgp::SolveStatus::success) {
        std::cerr << "error: " << result.message << '\n';
        return 1;
      }
      if (!solve_out.empty()) {
        write_file(solve_out, dmdgp::write_realization(result.x));
      }
      return 0;
    }

    if (*verify) {
      auto g = dmdgp::read_instance_file(verify_instance);
      auto x = dmdgp::read_realization(read_file(verify_realization));
      std::cout << "mde: " << dmdgp::mde(x, g) << '\n';
      return 0;
    }

    if (*bench) {
      std::vector<fs::path> files;
      for (const auto& entry : fs::directory_iterator(bench_dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".dmdgp") {
          files.push_back(entry.path());
        }
      }
      std::sort(files.begin(), files.end());
      if (files.empty()) {
        std::cerr << "error: no .dmdgp files in " << bench_dir << '\n';
        return 2;
      }
      std::vector<BenchRow> rows(files.size());
      std::atomic<std::size_t> next{0};
      auto worker = [&] {
        for (std::size_t idx = next.fetch_add(1); idx < files.size();
             idx = next.fetch_add(1)) {
          BenchRow& row = rows[idx];
          row.id = files[idx].stem().string();
          try {
            auto g = dmdgp::read_instance_file(files[idx]);
            row.v = g.n();
            row.e = g.edge_count();
            row.bp = run_bp(g, bench_tol, bench_time_limit, bench_repeats);
            row.sbbu = run_sbbu(g, bench_tol, bench_repeats);
          } catch (const std::exception& e) {
            row.error = e.what();
          }
        }
      };
      const int jobs = std::max(1, bench_jobs);
      if (jobs == 1) {
        worker();
      } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
      }

      std::ofstream report(bench_out);
      if (!report) {
        std::cerr << "error: cannot open " << bench_out << '\n';
        return 2;
      }
      print_csv(report, rows);
      print_csv(std::cout, rows);

      if (!bench_hist.empty()) {
        std::ofstream hist(bench_hist);
        hist << "instance,sep,dist\n";
        for (std::size_t idx = 0; idx < files.size(); ++idx) {
          try {
            auto g = dmdgp::read_instance_file(files[idx]);
            for (const auto& e : g.edges()) {
              hist << rows[idx].id << ',' << e.j - e.i << ',' << e.d << '\n';
            }
          } catch (const std::exception&) {
          }
        }
      }

      bool all_ok = true;
      for (const auto& row : rows) {
        if (!row.error.empty()) {
          std::cerr << "error: " << row.id << ": " << row.error << '\n';
          all_ok = false;
        } else if (!row.bp.ok || !row.sbbu.ok) {
          std::cerr << "error: " << row.id << ": "
                    << (!row.bp.ok ? "bp: " + row.bp.message + " " : "")
                    << (!row.sbbu.ok ? "sbbu: " + row.sbbu.message : "") << '\n';
          all_ok = false;
        }
      }
      return all_ok ? 0 : 1;
    }
  } catch (const dmdgp::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const dmdgp::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
