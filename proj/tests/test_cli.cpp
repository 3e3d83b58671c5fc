#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "qjet/serial.hpp"

namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / "qjet_cli_test") {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

int run(const std::string& args, const std::string& log) {
    const std::string cmd = std::string(QJET_BIN) + " " + args + " >" + log + " 2>&1";
    const int status = std::system(cmd.c_str());
    if (status == -1) return -1;
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
}

} // namespace

TEST_CASE("cli end to end") {
    TempDir dir;
    const std::string log = dir.file("log.txt");
    const std::string data = dir.file("data.qjet");

    SUBCASE("gen-data, evaluate on itself, postprocess, plot") {
        CHECK(run("gen-data --count 24 --size 8 --seed 3 --out " + data, log) == 0);

        const std::string eval_log = dir.file("eval.txt");
        CHECK(run("evaluate " + data + " " + data, eval_log) == 0);
        CHECK(slurp(eval_log) == "0.000000\n");

        const std::string filtered = dir.file("filtered.qjet");
        CHECK(run("postprocess " + data + " --k 2 --out " + filtered, log) == 0);
        CHECK(fs::exists(filtered));

        // Train briefly, then plot its metrics and sample from the checkpoint.
        const std::string ckpt = dir.file("model.qdmw");
        const std::string csv = dir.file("metrics.csv");
        CHECK(run("train --data " + data + " --epochs 1 --batch-size 8 --model quantum"
                  " --layers 1 --seed 5 --threads 2 --checkpoint " + ckpt +
                  " --metrics " + csv, log) == 0);
        CHECK(fs::exists(ckpt));
        CHECK(fs::exists(csv));

        const std::string svg = dir.file("plot.svg");
        CHECK(run("plot " + csv + " --out " + svg, log) == 0);
        CHECK(slurp(svg).find("<svg") == 0);

        const std::string prefix = dir.file("sample");
        CHECK(run("sample --checkpoint " + ckpt + " --count 2 --size 8 --seed 4"
                  " --out-prefix " + prefix, log) == 0);
        CHECK(fs::exists(prefix + "_0000.pgm"));
        CHECK(fs::exists(prefix + "_0001.pgm"));
        CHECK(fs::exists(prefix + ".qjet"));
    }

    SUBCASE("same seed twice gives byte-identical artifacts") {
        CHECK(run("gen-data --count 16 --size 8 --seed 9 --out " + data, log) == 0);
        const std::string c1 = dir.file("m1.qdmw"), c2 = dir.file("m2.qdmw");
        const std::string v1 = dir.file("m1.csv"), v2 = dir.file("m2.csv");
        const std::string train_args = "train --data " + data +
                                       " --epochs 1 --batch-size 4 --model hybrid --seed 7";
        CHECK(run(train_args + " --checkpoint " + c1 + " --metrics " + v1, log) == 0);
        CHECK(run(train_args + " --checkpoint " + c2 + " --metrics " + v2, log) == 0);
        CHECK(slurp(v1) == slurp(v2));
        CHECK(slurp(c1) == slurp(c2));
        CHECK(!slurp(v1).empty());
    }

    SUBCASE("usage errors exit with 1") {
        CHECK(run("gen-data --count 0 --out " + data, log) == 1);
        CHECK(run("no-such-command", log) == 1);
        CHECK(run("train", log) == 1);  // missing required --data
        CHECK(run("", log) == 1);       // subcommand required
    }

    SUBCASE("data errors exit with 2") {
        const std::string bogus = dir.file("bogus.qjet");
        std::ofstream(bogus) << "not a dataset";
        CHECK(run("evaluate " + bogus + " " + bogus, log) == 2);
        CHECK(run("sample --checkpoint " + bogus + " --out-prefix " + dir.file("s"), log) == 2);
        CHECK(run("evaluate " + dir.file("missing.qjet") + " " + bogus, log) == 2);
    }
}
