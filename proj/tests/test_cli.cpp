// End-to-end checks of the lamplab binary: exit codes, output shapes and
// the byte-identical determinism contract. The binary path arrives as argv[1].
#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

int failures = 0;

void check(bool ok, const std::string& what) {
    if (!ok) {
        ++failures;
        std::cerr << "[FAIL] " << what << "\n";
    }
}

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run(const std::string& cmd) {
    RunResult r;
    FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf{};
    while (std::size_t got = fread(buf.data(), 1, buf.size(), pipe)) r.output.append(buf.data(), got);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: test_cli <lamplab binary>\n";
        return 2;
    }
    const std::string bin = argv[1];
    const auto dir = std::filesystem::temp_directory_path() / "lamplab_cli_test";
    std::filesystem::create_directories(dir);
    const auto path = [&](const char* name) { return (dir / name).string(); };

    // generate: level-3 gasket has 42 vertices
    const RunResult gen =
        run(bin + " generate --family gasket --level 3 --out " + path("g3.edges"));
    check(gen.exit_code == 0, "generate exits 0: " + gen.output);
    check(gen.output.find("vertices=42") != std::string::npos,
          "generate reports 42 vertices: " + gen.output);
    check(std::filesystem::exists(path("g3.edges")), "edge file written");

    // validation failures exit 1
    check(run(bin + " walk --family lattice --dim 1 --radius 50 --steps -5 --out " +
              path("w.csv")).exit_code == 1,
          "negative steps exit 1");
    check(run(bin + " walk --family nosuch --steps 5 --out " + path("w.csv")).exit_code == 1,
          "unknown family exit 1");
    check(run(bin + " --nonsense").exit_code == 1, "unknown flag exit 1");
    check(run(bin + " walk --family lattice --dim 1 --radius 20 --steps 100000 --out " +
              path("w.csv")).exit_code == 1,
          "boundary guard violation exit 1");

    // determinism: identical bytes for identical seeds, any worker count
    const std::string walk_cmd = " walk --family lattice --dim 1 --radius 200 --steps 4000"
                                 " --ensemble 6 --seed 99 --checkpoints dyadic --out ";
    check(run(bin + walk_cmd + path("w1.csv") + " --workers 1").exit_code == 0, "walk runs");
    check(run(bin + walk_cmd + path("w2.csv") + " --workers 2").exit_code == 0, "walk runs x2");
    check(slurp(path("w1.csv")) == slurp(path("w2.csv")),
          "walk output independent of worker count");
    check(slurp(path("w1.csv")).rfind("# manifest config_hash=", 0) == 0,
          "manifest line present");

    // exponent on the line lands near 1/3 and reruns identically
    const std::string expo_cmd = bin + " exponent --family lattice --dim 1 --estimator"
                                       " collapsed --nmin 1000 --nmax 100000 --out ";
    const RunResult e1 = run(expo_cmd + path("e1.csv"));
    const RunResult e2 = run(expo_cmd + path("e2.csv"));
    check(e1.exit_code == 0, "exponent exits 0: " + e1.output);
    check(e1.output.find("slope=0.34") != std::string::npos,
          "exponent slope near 1/3: " + e1.output);
    check(slurp(path("e1.csv")) == slurp(path("e2.csv")), "exponent rerun byte-identical");

    // config file merged under flags
    {
        std::ofstream cfg(path("run.cfg"));
        cfg << "# experiment config\nfamily = gasket\nlevel = 2\nout = " << path("cfg.edges")
            << "\n";
    }
    const RunResult viacfg = run(bin + " generate --config " + path("run.cfg"));
    check(viacfg.exit_code == 0, "config-driven generate: " + viacfg.output);
    check(viacfg.output.find("vertices=15") != std::string::npos,
          "level-2 gasket from config has 15 vertices: " + viacfg.output);

    // lamplighter, heatkernel, resistance, lil, sandwich-audit smoke runs
    check(run(bin + " lamplighter --family lattice --dim 1 --radius 100 --steps 1000"
                    " --ensemble 4 --seed 7 --out " + path("lamp.csv")).exit_code == 0,
          "lamplighter runs");
    check(run(bin + " heatkernel --family lattice --dim 1 --radius 128 --nmax 256 --out " +
              path("hk.csv")).exit_code == 0,
          "heatkernel runs");
    check(run(bin + " resistance --family gasket --level 5 --radii 1,2,4,8 --out " +
              path("rho.csv")).exit_code == 0,
          "resistance runs");
    check(run(bin + " lil --family lattice --dim 1 --radius 400 --functional range-sup"
                    " --ensemble 20 --nmax 16384 --seed 3 --workers 2 --out " +
              path("lil.csv")).exit_code == 0,
          "lil runs");
    check(run(bin + " sandwich-audit --graphs 4 --size 7 --steps 32 --per-graph 3 --seed 5"
                    " --out " + path("sand.csv")).exit_code == 0,
          "sandwich audit runs");

    std::filesystem::remove_all(dir);
    if (failures == 0) {
        std::puts("test_cli: all checks passed");
        return 0;
    }
    std::fprintf(stderr, "test_cli: %d failures\n", failures);
    return 1;
}
