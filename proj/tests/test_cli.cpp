#include "support.hpp"

#include <cstdlib>
#include <filesystem>
#include <map>
#include <sys/wait.h>

using namespace aasrdl::testing;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    fs::path p = fs::temp_directory_path() / ("aasrdl_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int cli(const std::string& args, const fs::path& out)
{
    std::string cmd = std::string("cd ") + AASRDL_SOURCE_DIR + " && " + AASRDL_CLI + " --out " + out.string() + " " + args +
                      " > " + (out.string() + ".stdout") + " 2> " + (out.string() + ".stderr");
    int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::map<std::string, std::string> tree(const fs::path& dir)
{
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(dir))
        if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = slurp(e.path().string());
    return files;
}

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

} // namespace

TEST(Cli, ValidateExitCodes)
{
    auto out = scratch("validate");
    EXPECT_EQ(cli("validate models/slow.arl", out), 0);
    EXPECT_NE(slurp(out.string() + ".stdout").find("0 error(s)"), std::string::npos);
    EXPECT_EQ(cli("validate models/typo.arl", out), 1);
    EXPECT_NE(slurp((out / "validate.txt").string()).find("typo.arl:8"), std::string::npos);
    EXPECT_EQ(cli("validate models/does_not_exist.arl", out), 2);
    EXPECT_EQ(cli("validate", out), 2);
    EXPECT_EQ(cli("validate models/slow.arl --no-such-flag", out), 2);
    EXPECT_EQ(cli("frobnicate models/slow.arl", out), 2);
}

TEST(Cli, CheckmodesReportsOverlap)
{
    auto out = scratch("checkmodes");
    EXPECT_EQ(cli("checkmodes models/slow.arl", out), 1);
    std::string csv = slurp((out / "engine.exclusiveness.csv").string());
    EXPECT_EQ(csv.rfind("mode,transition_a,transition_b,witness\nSLOW,1->BEYONDSLOW,2->NORMAL,N2=", 0), 0u);
    EXPECT_EQ(cli("checkmodes models/exclusive.arl", out), 0);
}

TEST(Cli, SimulateWritesHorizonPlusOneRows)
{
    auto out = scratch("simulate");
    EXPECT_EQ(cli("simulate models/counter.arl --horizon 10", out), 0);
    // header, cycles 0..10, trailing status comment
    std::string trace = slurp((out / "trace.csv").string());
    EXPECT_EQ(lines(trace), 13u);
    EXPECT_NE(trace.find("\n10,"), std::string::npos);
    EXPECT_EQ(cli("simulate models/lowoil.arl --profile models/lowoil_breakpoint.json", out), 1);
    EXPECT_EQ(cli("simulate models/counter.arl --horizon -3", out), 2);
}

TEST(Cli, GentestsTable)
{
    auto out = scratch("gentests");
    EXPECT_EQ(cli("gentests models/slow.arl --module module_1_1", out), 0);
    std::string csv = slurp((out / "module_1_1.tests.csv").string());
    EXPECT_EQ(lines(csv), 5u);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "Ax,Ay,Az,expected_decision,decision_location");
    EXPECT_NE(slurp((out / "coverage.txt").string()).find("total coverage 100.0%"), std::string::npos);
    EXPECT_EQ(cli("gentests models/slow.arl --module nope", out), 2);
    EXPECT_EQ(cli("gentests models/slow.arl", out), 2);
}

TEST(Cli, RepeatedRunsAreByteIdentical)
{
    const char* commands[] = {
        "validate models/slow.arl",
        "diagram models/slow.arl",
        "checkmodes --emit-smt models/slow.arl",
        "--seed 3 --verbose simulate models/engine_start.arl --profile models/engine_start.json --horizon 50",
        "estimate models/engine_start.arl --property models/engine_start.ltl --profile models/engine_start.json "
        "--delta 0.1 --horizons 10,40 --jobs 2",
        "gentests models/slow.arl --all --scope modes",
    };
    for (const char* c : commands) {
        auto a = scratch("det_a"), b = scratch("det_b");
        int ra = cli(c, a), rb = cli(c, b);
        EXPECT_EQ(ra, rb) << c;
        EXPECT_EQ(tree(a), tree(b)) << c;
    }
}
