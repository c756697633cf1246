// ohs-kit <jobfile.json> [--pretty] [--out <path>] [--seed <u64>]
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ohs/runner.hpp"

int main(int argc, char **argv) {
  CLI::App app{"Run a job file and write a JSON report."};
  std::string jobfile, out;
  bool pretty = false;
  std::optional<std::uint64_t> seed;
  app.add_option("jobfile", jobfile, "job description (JSON)")->required();
  app.add_flag("--pretty", pretty, "indented report followed by text tables");
  app.add_option("--out", out, "write the report here instead of stdout");
  app.add_option("--seed", seed, "seed for sampled checks (overrides the job)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return e.get_exit_code() == 0 ? rc : ohs::kUsage;
  }

  std::ifstream in(jobfile, std::ios::binary);
  if (!in) {
    std::cerr << "ohs-kit: cannot read " << jobfile << "\n";
    return ohs::kUsage;
  }
  std::stringstream buf;
  buf << in.rdbuf();

  const auto r = ohs::run_document(buf.str(), seed);
  // a job may name its own output file; --out wins
  if (out.empty()) {
    try {
      if (auto job = ohs::parse_jobspec(buf.str()); job.output) out = *job.output;
    } catch (const ohs::Error &) {
    }
  }
  const std::string text = pretty ? r.pretty : r.report + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out, std::ios::binary);
    if (!f) {
      std::cerr << "ohs-kit: cannot write " << out << "\n";
      return ohs::kUsage;
    }
    f << text;
  }
  if (r.exit_code == ohs::kUsage) {
    std::cerr << "ohs-kit: " << r.report << "\n";
  }
  std::fprintf(stderr, "elapsed %.3fs\n", r.seconds);
  return r.exit_code;
}
