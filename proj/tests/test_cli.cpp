// End-to-end driver for the twise binary: spawns the real executable and
// checks output text and exit codes. TWISE_BIN is injected by the build.

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "twise/base_families.hpp"
#include "twise/io.hpp"

using namespace twise;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream is(path);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

const std::string& workdir() {
    static const std::string dir = [] {
        char tmpl[] = "/tmp/twise_cli_XXXXXX";
        REQUIRE(mkdtemp(tmpl) != nullptr);
        return std::string(tmpl);
    }();
    return dir;
}

RunResult run_cli(const std::string& args) {
    const std::string out_path = workdir() + "/stdout.txt";
    const std::string err_path = workdir() + "/stderr.txt";
    std::string cmd = std::string(TWISE_BIN) + " " + args + " >" + out_path + " 2>" + err_path;
    int status = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    return r;
}

std::string path_in_workdir(const std::string& name) { return workdir() + "/" + name; }

} // namespace

TEST_CASE("build writes a family file and prints the plan") {
    auto f = path_in_workdir("f43.pf");
    auto r = run_cli("build 4 3 --no-catalog --out " + f);
    REQUIRE(r.code == 0);
    CHECK(r.out.find("combine n=4 t=3 size=24") != std::string::npos);
    CHECK(r.out.find("size=24") != std::string::npos);
    std::string content = slurp(f);
    CHECK(content.substr(0, content.find('\n')) == "permfamily v1 n=4 size=24");
    CHECK(std::count(content.begin(), content.end(), '\n') == 25);
}

TEST_CASE("verify passes the built family and reports the exact target") {
    auto f = path_in_workdir("f43.pf");
    run_cli("build 4 3 --no-catalog --out " + f);
    auto r = run_cli("verify " + f + " --t 3");
    CHECK(r.code == 0);
    CHECK(r.out == "verdict=pass t=3 expected=1/24 worst=0/1 witness=none\n");
}

TEST_CASE("build rejects degrees that are not powers of two") {
    auto r = run_cli("build 6 3");
    CHECK(r.code == 2);
    CHECK(r.err.find("power of two") != std::string::npos);
}

TEST_CASE("build stops at the cap with the exact size and bound") {
    auto r = run_cli("build 16 3 --out " + path_in_workdir("too_big.pf"));
    CHECK(r.code == 3);
    CHECK(r.err.find("size=34594560") != std::string::npos);
    CHECK(r.err.find("3^32") != std::string::npos);
}

TEST_CASE("the catalog shortcut builds the projective family at (8,3)") {
    auto f = path_in_workdir("f83.pf");
    auto r = run_cli("build 8 3 --out " + f);
    REQUIRE(r.code == 0);
    CHECK(r.out.find("mobius n=8 t=3 size=336") != std::string::npos);
    auto v = run_cli("verify " + f + " --t 3");
    CHECK(v.code == 0);
    CHECK(v.out.find("expected=1/336") != std::string::npos);
}

TEST_CASE("verify fails non-uniform input with a witness and exit 1") {
    auto f = path_in_workdir("cyc5.pf");
    {
        std::ofstream os(f);
        write_family(os, cyclic_family(5));
    }
    auto r = run_cli("verify " + f + " --t 2");
    CHECK(r.code == 1);
    CHECK(r.out == "verdict=fail t=2 expected=1/20 worst=3/20 witness=(0,1)->(0,1)\n");
}

TEST_CASE("malformed headers are rejected at the offending line") {
    auto f = path_in_workdir("broken.pf");
    {
        std::ofstream os(f);
        os << "permfamily v2 n=4 size=1\n0 1 2 3\n";
    }
    auto r = run_cli("verify " + f + " --t 1");
    CHECK(r.code == 2);
    CHECK(r.err.find("line 1") != std::string::npos);
}

TEST_CASE("sampled verification runs against file input") {
    auto f = path_in_workdir("f83.pf");
    run_cli("build 8 3 --out " + f);
    auto r = run_cli("verify " + f + " --t 3 --mode sampled --samples 20000 --seed 1 --tol 0.02");
    CHECK(r.code == 0);
    CHECK(r.out.find("mode=sampled") != std::string::npos);
    auto again = run_cli("verify " + f + " --t 3 --mode sampled --samples 20000 --seed 1 --tol 0.02");
    CHECK(again.out == r.out);
}

TEST_CASE("bound prints the closed-form number alone") {
    auto r = run_cli("bound 8 4");
    CHECK(r.code == 0);
    CHECK(r.out == "28\n");
    CHECK(run_cli("bound 8 3").out == "14\n");
}

TEST_CASE("design certifies selection files end to end") {
    auto good = path_in_workdir("complete_4_2.sel");
    {
        std::ofstream os(good);
        write_selection(os, Selection::complete(4));
    }
    auto r = run_cli("design " + good + " --t 1");
    CHECK(r.code == 0);
    CHECK(r.out.find("design verdict=pass t=1 lambda=3") != std::string::npos);
    CHECK(r.out.find("selection verdict=pass") != std::string::npos);

    auto bad = path_in_workdir("bad.sel");
    {
        std::ofstream os(bad);
        write_selection(os, Selection::from_blocks(4, 2, {{0, 1}, {0, 1}, {2, 3}}));
    }
    auto rb = run_cli("design " + bad + " --t 1");
    CHECK(rb.code == 1);
    CHECK(rb.out.find("design verdict=fail t=1 witness=(2) count=1 baseline=2") != std::string::npos);
}

TEST_CASE("sizes emits the recursion comparison rows") {
    auto r = run_cli("sizes --max-m 3 --max-l 2");
    CHECK(r.code == 0);
    CHECK(r.out.find("m=3 l=2 n=8 t=3 improved=6720 naive=40320 bound=43046721 trivial=40320") !=
          std::string::npos);
}

TEST_CASE("info prints the recursion tree without building") {
    auto r = run_cli("info 8 3 --no-catalog");
    CHECK(r.code == 0);
    CHECK(r.out.find("combine n=8 t=3 size=6720 selection=70") != std::string::npos);
    CHECK(r.out.find("cyclic n=4 t=1 size=4") != std::string::npos);
    auto big = run_cli("info 16 3 --no-catalog");
    CHECK(big.code == 0);
    CHECK(big.out.find("size=691891200") != std::string::npos);
}

TEST_CASE("identical invocations produce byte-identical output") {
    auto a = run_cli("build 4 3 --no-catalog");
    auto b = run_cli("build 4 3 --no-catalog");
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.err == b.err);
    // family on stdout, plan on stderr in this mode
    CHECK(a.out.find("permfamily v1 n=4 size=24") == 0);
    CHECK(a.err.find("combine n=4") != std::string::npos);
}

TEST_CASE("a custom selection file reroutes the root combine step") {
    auto selfile = path_in_workdir("weak.sel");
    {
        std::ofstream os(selfile);
        write_selection(os, Selection::from_blocks(4, 2, {{0, 1}, {2, 3}}));
    }
    auto f = path_in_workdir("custom.pf");
    auto r = run_cli("build 4 3 --no-catalog --selection " + selfile + " --out " + f);
    REQUIRE(r.code == 0);
    CHECK(r.out.find("selection=2 (custom)") != std::string::npos);
    CHECK(r.out.find("size=8") != std::string::npos);
    // too weak a selection: the built family fails verification
    auto v = run_cli("verify " + f + " --t 3");
    CHECK(v.code == 1);
}

TEST_CASE("paranoid mode verifies hypotheses before building") {
    auto ok = run_cli("build 4 3 --no-catalog --paranoid --out " + path_in_workdir("p.pf"));
    CHECK(ok.code == 0);

    auto selfile = path_in_workdir("weak.sel");
    {
        std::ofstream os(selfile);
        write_selection(os, Selection::from_blocks(4, 2, {{0, 1}, {2, 3}}));
    }
    auto bad = run_cli("build 4 3 --no-catalog --paranoid --selection " + selfile + " --out " +
                       path_in_workdir("pb.pf"));
    CHECK(bad.code == 1);
    CHECK(bad.err.find("paranoid") != std::string::npos);
}

TEST_CASE("usage errors exit with code 2") {
    CHECK(run_cli("").code == 2);
    CHECK(run_cli("verify missing.pf --t 2").code == 2);
    CHECK(run_cli("verify --t 2").code == 2);
    CHECK(run_cli("build 8").code == 2);
}
