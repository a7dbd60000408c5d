// End-to-end checks of the command line tool: exit codes, error surfaces,
// and the export/re-load round trip. Takes the binary path as argv[1].

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

namespace {

std::string tool;
int failures = 0;

struct Run {
    int exit_code = -1;
    std::string output;
};

Run run(const std::string& args) {
    Run r;
    std::string cmd = tool + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe)
        return r;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0)
        r.output.append(buf, got);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

void check(bool ok, const std::string& what) {
    std::printf("%s  %s\n", ok ? "ok  " : "FAIL", what.c_str());
    if (!ok)
        ++failures;
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: mbs_cli_check <tool>\n");
        return 2;
    }
    tool = argv[1];

    // verdict computed, whatever it is: exit 0
    Run funny = run("finfb --catalog epr-bohm --f +,+");
    check(funny.exit_code == 0 && funny.output.find("verdict: FINFB") != std::string::npos,
          "funny verdict exits 0");
    Run clean = run("finfb --catalog epr-bohm --f +,-");
    check(clean.exit_code == 0 && clean.output.find("verdict: NONE") != std::string::npos,
          "clean verdict exits 0");

    // invalid input: exit 1 with a parse position
    {
        std::ofstream bad("/tmp/mbs_bad.model");
        bad << "family explicit a b\nsplit a c : (0,0,0,0)\n";
    }
    Run parse = run("validate --model /tmp/mbs_bad.model");
    check(parse.exit_code == 1 && parse.output.find("line 2") != std::string::npos,
          "parse errors exit 1 with a position");

    // a model violating the presentation conditions is a verdict, not an error
    {
        std::ofstream bad("/tmp/mbs_comparable.model");
        bad << "family explicit a b\nsplit a b : (0,0,0,0) (1,0,0,0)\n";
    }
    Run violation = run("validate --model /tmp/mbs_comparable.model");
    check(violation.exit_code == 0 &&
              violation.output.find("pairwise-slr") != std::string::npos,
          "violations are reported with exit 0");

    // unknown catalog name: exit 1 and list the alternatives
    Run unknown = run("validate --catalog m3");
    check(unknown.exit_code == 1 && unknown.output.find("epr-bohm") != std::string::npos,
          "unknown catalog entries list the alternatives");

    // unsupported construct: exit 2
    Run unsupported = run("plot --catalog wrapped -o /tmp/mbs_wrapped.svg");
    check(unsupported.exit_code == 2, "non-2D plots exit 2");

    // export, re-load, same verdict
    Run gen = run("catalog gen m2 --param n=6 -o /tmp/mbs_m2.model");
    check(gen.exit_code == 0, "catalog export succeeds");
    Run from_cat = run("inffb --catalog m2 --param n=6 --f zeros");
    Run from_file = run("inffb --model /tmp/mbs_m2.model --f zeros");
    auto verdict_of = [](const Run& r) {
        auto pos = r.output.find("verdict:");
        return pos == std::string::npos ? std::string() : r.output.substr(pos, 20);
    };
    check(from_file.exit_code == 0 && verdict_of(from_cat) == verdict_of(from_file) &&
              !verdict_of(from_file).empty(),
          "re-loaded model reproduces the verdict");

    Run gen_lw1 = run("catalog gen lw1 -o /tmp/mbs_lw1.model");
    Run cp = run("choice-points --model /tmp/mbs_lw1.model --pair a,b --at \"(0,0,0,0)\"");
    check(gen_lw1.exit_code == 0 && cp.exit_code == 0 &&
              cp.output.find("choice point: yes") != std::string::npos,
          "re-loaded limit declarations classify the limit point");

    if (failures == 0) {
        std::printf("cli: all checks passed\n");
        return 0;
    }
    std::printf("cli: %d check(s) failed\n", failures);
    return 1;
}
