// Acceptance run: every property at full trial counts, one PASS/FAIL line
// per criterion. Exits non-zero if any criterion fails.

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <sys/wait.h>

#include "gframe/cli.hpp"
#include "gframe/corpus.hpp"

namespace {

using namespace gframe;

struct Captured {
    int code = -1;
    std::string out;
    double seconds = 0.0;
};

/// Runs the CLI binary as a separate process, capturing stdout.
Captured run_cli(const std::string& args)
{
    Captured c;
    const std::string cmd = std::string("\"") + GFRAME_CLI_PATH + "\" " + args + " 2>&1";
    const auto start = std::chrono::steady_clock::now();
    FILE* pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr) {
        return c;
    }
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
        c.out.append(buf.data(), n);
    }
    const int status = pclose(pipe);
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    c.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return c;
}

/// The CLI criterion: selftest time and status, a 100-instance round trip
/// through the generator and parser, and a hypothesis-violation exit code.
corpus::Result cli_criterion()
{
    corpus::Result r;
    r.id = 10;
    r.title = "CLI: selftest, round trip, hypothesis-violation exit code";
    const auto start = std::chrono::steady_clock::now();
    corpus::Recorder rec(r);

    const Captured self = run_cli("selftest");
    rec.check(self.code == 0, [&] { return "selftest exited " + std::to_string(self.code) + ":\n" + self.out; });
    rec.check(self.seconds <= 60.0, [&] { return "selftest took " + std::to_string(self.seconds) + " s"; });

    // Library round trip on generated instances with every payload kind...
    const corpus::Result lib = corpus::serialization({});
    r.checks += lib.checks;
    r.failures += lib.failures;
    r.samples.insert(r.samples.end(), lib.samples.begin(), lib.samples.end());
    // ...and on the CLI's own `generate` output.
    const char* kinds[] = {"random_gframe", "g_riesz", "g_onb", "parseval", "controlled_commuting", "weighted"};
    for (int t = 0; t < 100; ++t) {
        rec.trial("cli round trip", [&] {
            const bool square = t % 6 == 1 || t % 6 == 2;
            const std::vector<std::string> args = {"generate", "--kind", kinds[t % 6], "--dim", "4", "--partition",
                                                   square ? "2,1,1" : "2,2,1", "--seed", std::to_string(t)};
            std::ostringstream out;
            std::ostringstream err;
            const int code = cli::run_command(args, out, err);
            rec.check(code == 0, [&] { return "generate exited " + std::to_string(code) + ": " + err.str(); });
            const std::string text = out.str();
            rec.check(serialize_instance(parse_instance(text)) + "\n" == text,
                      [&] { return "round trip changed generated instance " + std::to_string(t); });
        });
    }

    // lambda = 1.5 against the identity g-frame, where sqrt(A/B) = 1.
    Instance bad{identity_gframe(2)};
    bad.weights = WeightSequence::real({2.5, 1.0});
    const auto path = std::filesystem::temp_directory_path() / "gframe_acceptance_violation.json";
    std::ofstream(path) << serialize_instance(bad);
    const Captured v = run_cli("invert canonical --in \"" + path.string() + "\"");
    std::filesystem::remove(path);
    rec.check(v.code == 2, [&] { return "violation exited " + std::to_string(v.code); });
    rec.check(v.out.find("lambda < sqrt(A_L / B_L)") != std::string::npos,
              [&] { return "violation report does not name the inequality:\n" + v.out; });

    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

}  // namespace

int main()
{
    corpus::Config cfg;  // full trial counts, d up to 8
    std::vector<corpus::Result> results;
    auto runners = corpus::runners();
    runners.pop_back();  // serialization is folded into the CLI criterion
    for (const auto& runner : runners) {
        results.push_back(runner(cfg));
    }
    results.push_back(cli_criterion());

    bool all = true;
    for (const auto& r : results) {
        all = all && r.passed();
        std::cout << (r.passed() ? "PASS" : "FAIL") << "  criterion " << r.id << ": " << r.title << "  ("
                  << r.checks << " checks, " << r.failures << " failures, " << r.seconds << " s)\n";
        for (const auto& s : r.samples) {
            std::cout << "        " << s << '\n';
        }
    }
    std::cout << (all ? "all criteria passed" : "SOME CRITERIA FAILED") << '\n';
    return all ? 0 : 1;
}
