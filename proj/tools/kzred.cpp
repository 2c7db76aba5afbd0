// kzred command-line front end.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kzred/kzred.hpp"

namespace {

using kzred::harness::json;

kzred::RealMatrix load_real(const std::string& path) {
  if (path == "-") return kzred::io::read_real_matrix(std::cin);
  std::ifstream in(path);
  if (!in) throw kzred::ParseError("cannot open " + path);
  return kzred::io::read_real_matrix(in);
}

kzred::IntMatrix load_int(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw kzred::ParseError("cannot open " + path);
  return kzred::io::read_int_matrix(in);
}

template <typename T>
void save(const std::string& path, const kzred::Matrix<T>& m) {
  if (path.empty()) return;
  if (path == "-") {
    kzred::io::write_matrix(std::cout, m);
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  kzred::io::write_matrix(out, m);
}

std::vector<std::string> z_strings(const std::vector<std::int64_t>& z) {
  std::vector<std::string> s;
  for (auto v : z) s.push_back(std::to_string(v));
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"KZ / LLL lattice reduction"};
  app.require_subcommand(1);

  // reduce
  std::string red_input, red_alg = "kz-improved", red_r, red_z, red_format = "text";
  double red_delta = 0.99;
  bool red_watch = false;
  auto* reduce = app.add_subcommand("reduce", "Reduce a basis matrix (columns are basis vectors)");
  reduce->add_option("--input", red_input, "Matrix file, '-' for stdin")->required();
  reduce->add_option("--algorithm", red_alg)
      ->check(CLI::IsMember({"kz-zqw", "kz-improved", "lll"}));
  reduce->add_option("--delta", red_delta, "Lovasz parameter");
  reduce->add_option("--output-r", red_r, "Write R here ('-' for stdout)");
  reduce->add_option("--output-z", red_z, "Write Z here ('-' for stdout)");
  reduce->add_flag("--watchdog-53bit", red_watch, "Fail if an integer exceeds 2^53");
  reduce->add_option("--format", red_format)->check(CLI::IsMember({"text", "json"}));

  // svp
  std::string svp_input, svp_variant = "se-improved", svp_format = "text";
  double svp_delta = 0.99;
  auto* svp = app.add_subcommand("svp", "Shortest vector of the lattice spanned by the columns");
  svp->add_option("--input", svp_input)->required();
  svp->add_option("--variant", svp_variant)
      ->check(CLI::IsMember({"se-original", "se-dkwz", "se-improved"}));
  svp->add_option("--delta", svp_delta, "LLL parameter of the preprocessing");
  svp->add_option("--format", svp_format)->check(CLI::IsMember({"text", "json"}));

  // verify
  std::string ver_input, ver_z, ver_report = "text";
  double ver_delta = 0.99;
  auto* verify = app.add_subcommand("verify", "Certify that A Z is KZ-reduced");
  verify->add_option("--input", ver_input, "Basis A")->required();
  verify->add_option("--z", ver_z, "Integer transform Z")->required();
  verify->add_option("--delta", ver_delta);
  verify->add_option("--report", ver_report)->check(CLI::IsMember({"text", "json"}));

  // bench
  kzred::harness::BenchSpec bs;
  std::string bench_out = "-", emit_certs;
  double bench_delta = 0.99;
  auto* bench = app.add_subcommand("bench", "Run randomized benchmarks, CSV output");
  bench->add_option("--cases", bs.cases)->delimiter(',');
  bench->add_option("--n-list", bs.n_list, "Complex dimensions")->delimiter(',');
  bench->add_option("--trials", bs.trials);
  bench->add_option("--algorithms", bs.algorithms)->delimiter(',');
  bench->add_option("--seed", bs.seed0);
  bench->add_option("--delta", bench_delta);
  bench->add_flag("--certify", bs.certify);
  bench->add_flag("--watchdog-53bit", bs.watchdog_53bit);
  bench->add_option("--emit-certs", emit_certs, "Directory for certificate JSON files");
  bench->add_option("--output", bench_out, "CSV path, '-' for stdout");

  // bounds
  std::string table = "hermite", bounds_format = "csv";
  int n_max = 16;
  double bounds_delta = 0.99;
  auto* bounds = app.add_subcommand("bounds", "Emit bound tables");
  bounds->add_option("--table", table)
      ->check(CLI::IsMember({"hermite", "f", "g", "h", "thm5", "ratio"}));
  bounds->add_option("--n-max", n_max)->check(CLI::PositiveNumber);
  bounds->add_option("--delta", bounds_delta);
  bounds->add_option("--format", bounds_format)->check(CLI::IsMember({"csv"}));

  // example2
  std::string ex_format = "text";
  double ex_delta = 0.99;
  auto* example2 = app.add_subcommand("example2", "Replicate the ill-conditioned 5x5 example");
  example2->add_option("--delta", ex_delta);
  example2->add_option("--format", ex_format)->check(CLI::IsMember({"text", "json"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*reduce) {
      const kzred::BasisMatrix a(load_real(red_input));
      kzred::KzOptions opt;
      opt.lll.delta = red_delta;
      opt.watchdog_53bit = red_watch;
      const kzred::KzResult res =
          kzred::reduce(a, kzred::parse_reduction_algorithm(red_alg), opt);
      save(red_r, res.basis.r.matrix());
      save(red_z, res.basis.z);
      if (red_format == "json") {
        json diag = json::array();
        for (std::size_t i = 0; i < a.cols(); ++i) diag.push_back(res.basis.r(i, i));
        std::cout << json{{"algorithm", red_alg},
                          {"flops", res.stats.counter.flops},
                          {"nodes", res.stats.counter.nodes},
                          {"expansions", res.stats.expansions},
                          {"max_abs_integer", res.stats.max_abs_integer.str()},
                          {"diag", diag},
                          {"r", kzred::io::to_string(res.basis.r.matrix())},
                          {"z", kzred::io::to_string(res.basis.z)}}
                         .dump(2)
                  << '\n';
      } else if (red_r.empty() && red_z.empty()) {
        std::cout << "R\n"
                  << kzred::io::to_string(res.basis.r.matrix()) << "Z\n"
                  << kzred::io::to_string(res.basis.z);
      }
      return 0;
    }

    if (*svp) {
      const kzred::BasisMatrix a(load_real(svp_input));
      const kzred::UpperTriangular r = kzred::qr_factorize(a).r;
      kzred::LLLParams p;
      p.delta = svp_delta;
      const auto sol = kzred::lll_aided_svp(r, p, kzred::parse_search_variant(svp_variant));
      std::vector<std::string> x;
      for (const auto& v : sol.x) x.push_back(v.str());
      if (svp_format == "json") {
        std::cout << json{{"variant", svp_variant},
                          {"norm", sol.norm},
                          {"x", x},
                          {"z_reduced", z_strings(sol.reduced.z)},
                          {"flops", sol.reduced.counters.flops},
                          {"nodes", sol.reduced.counters.nodes}}
                         .dump(2)
                  << '\n';
      } else {
        std::cout.precision(17);
        std::cout << "norm " << sol.norm << "\nx";
        for (const auto& s : x) std::cout << ' ' << s;
        std::cout << "\nnodes " << sol.reduced.counters.nodes << "\nflops "
                  << sol.reduced.counters.flops << '\n';
      }
      return 0;
    }

    if (*verify) {
      const kzred::BasisMatrix a(load_real(ver_input));
      const kzred::IntMatrix z = load_int(ver_z);
      const kzred::RealMatrix az = kzred::multiply(a.matrix(), z);
      const kzred::UpperTriangular r = kzred::qr_factorize(az).r;
      const auto cert = kzred::assert_kz_reduced(r, z, a, ver_delta);
      if (ver_report == "json")
        std::cout << kzred::harness::to_json(cert).dump(2) << '\n';
      else
        std::cout << kzred::harness::to_text(cert);
      return cert.all_pass() ? 0 : 1;
    }

    if (*bench) {
      bs.lll.delta = bench_delta;
      if (!emit_certs.empty()) bs.emit_certs = emit_certs;
      if (bench_out == "-") {
        kzred::harness::run_bench(bs, &std::cout);
      } else {
        std::ofstream out(bench_out);
        if (!out) throw std::runtime_error("cannot write " + bench_out);
        kzred::harness::run_bench(bs, &out);
      }
      return 0;
    }

    if (*bounds) {
      kzred::harness::write_bound_table(std::cout, kzred::bounds::parse_table(table), n_max,
                                        bounds_delta);
      return 0;
    }

    if (*example2) {
      const auto rep = kzred::harness::cmd_example2(ex_delta);
      if (ex_format == "json")
        std::cout << kzred::harness::to_json(rep).dump(2) << '\n';
      else
        std::cout << kzred::harness::to_text(rep);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
