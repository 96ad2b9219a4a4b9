#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

std::string cli_path() {
  const char* p = std::getenv("CQCODE_CLI");
  REQUIRE(p != nullptr);
  return p;
}

int run(const std::string& args) {
  const std::string cmd = cli_path() + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("cqcode_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

}  // namespace

TEST_CASE("info subcommand emits the measure table") {
  const fs::path dir = fresh_dir("info");
  CHECK(run("info --channel builtin:bsc01 --alpha 0.5 --out " + dir.string()) == 0);
  const std::string csv = slurp(dir / "info.csv");
  CHECK(csv.find("measure,alpha,value,unit") == 0);
  CHECK(csv.find("I(X;Y),1,0.531004") != std::string::npos);

  // empty alpha list: Holevo rows only
  const fs::path dir2 = fresh_dir("info2");
  CHECK(run("info --channel builtin:s2mac --out " + dir2.string()) == 0);
  const std::string csv2 = slurp(dir2 / "info.csv");
  CHECK(csv2.find("I_a") == std::string::npos);
  CHECK(csv2.find("I(AB;Y|T)") != std::string::npos);
}

TEST_CASE("malformed input exits with the validation code") {
  const fs::path dir = fresh_dir("bad");
  write(dir / "bad.json", "{not json");
  CHECK(run("info --channel " + (dir / "bad.json").string() + " --out " + dir.string()) == 2);
  CHECK(run("region --family builtin:example1 --setting nonsense --out " + dir.string()) == 2);
}

TEST_CASE("packing failures exit with code 3") {
  const fs::path dir = fresh_dir("packfail");
  write(dir / "pack.json",
        R"({"setting":"single","n":4,"counts":[2,2],"rate":0.69,"slack":0.0})");
  CHECK(run("pack --config " + (dir / "pack.json").string() + " --out " + dir.string()) == 3);
}

TEST_CASE("size-cap violations exit with code 4") {
  const fs::path dir = fresh_dir("cap");
  // n = 16 qubits exceeds the 2^14 dimension cap during decoding
  write(dir / "pack.json",
        R"({"setting":"single","n":16,"counts":[8,8],"rate":0.3,"slack":1.0})");
  CHECK(run("pack --config " + (dir / "pack.json").string() + " --out " + dir.string()) == 0);
  write(dir / "code.json", slurp(dir / "packed_code.json"));
  // a MAC decode over a 16-symbol code would need dim 2^16
  write(dir / "mac_pack.json",
        R"({"setting":"mac","n":16,"t_counts":[16],"a_counts":[[8,8]],"b_counts":[[8,8]],)"
        R"("rate_a":0.3,"rate_b":0.3,"slack":1.0})");
  CHECK(run("pack --config " + (dir / "mac_pack.json").string() + " --out " + dir.string()) == 0);
  write(dir / "decode.json", std::string(R"({"code":")") + (dir / "packed_code.json").string() +
                                 R"(","channel":"builtin:s2mac","mode":"joint"})");
  CHECK(run("decode --config " + (dir / "decode.json").string() + " --out " + dir.string()) == 4);
}

TEST_CASE("region subcommand reproduces the example-1 square") {
  const fs::path dir = fresh_dir("region");
  CHECK(run("region --family builtin:example1 --setting compound-mac --grid-step 0.25 "
            "--t-card 2 --out " +
            dir.string()) == 0);
  const std::string csv = slurp(dir / "region.csv");
  CHECK(csv.find("0.5,0.5") != std::string::npos);
  const std::string svg = slurp(dir / "region.svg");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("polygon") != std::string::npos);
}

TEST_CASE("pack and decode are byte-deterministic") {
  const fs::path dir = fresh_dir("det1");
  const fs::path dir2 = fresh_dir("det2");
  write(dir / "pack.json",
        R"({"setting":"mac","n":6,"t_counts":[6],"a_counts":[[5,1]],"b_counts":[[5,1]],)"
        R"("rate_a":0.35,"rate_b":0.35,"slack":0.45})");

  CHECK(run("pack --config " + (dir / "pack.json").string() + " --seed 7 --out " +
            dir.string()) == 0);
  CHECK(run("pack --config " + (dir / "pack.json").string() + " --seed 7 --out " +
            dir2.string()) == 0);
  CHECK(slurp(dir / "packed_code.json") == slurp(dir2 / "packed_code.json"));

  write(dir / "decode.json", std::string(R"({"code":")") + (dir / "packed_code.json").string() +
                                 R"(","channel":"builtin:s2mac","mode":"joint",)"
                                 R"("slack_a":-0.3162,"slack_b":-0.1155})");
  CHECK(run("decode --config " + (dir / "decode.json").string() + " --out " + dir.string()) == 0);
  const std::string first = slurp(dir / "decode.csv");
  CHECK(run("decode --config " + (dir / "decode.json").string() + " --out " + dir2.string()) ==
        0);
  CHECK(first == slurp(dir2 / "decode.csv"));
  CHECK(first.find("joint,") != std::string::npos);

  // different seed changes the codebook
  CHECK(run("pack --config " + (dir / "pack.json").string() + " --seed 8 --out " +
            dir2.string()) == 0);
  CHECK(slurp(dir / "packed_code.json") != slurp(dir2 / "packed_code.json"));
}

TEST_CASE("decode reports per-receiver errors for a BCD instance") {
  const fs::path dir = fresh_dir("bcd");
  write(dir / "pack.json",
        R"({"setting":"superposition","n":6,"joint_counts":[[2,1],[1,2]],)"
        R"("rate_u":0.6,"rate_x":0.55,"slack":0.76})");
  CHECK(run("pack --config " + (dir / "pack.json").string() + " --seed 1 --out " +
            dir.string()) == 0);

  // the swap-family members double as a simple BCD pair file
  write(dir / "pair.json", R"({"kind":"bcd","w_y":{"kind":"cq","a_size":2,"out_dim":2,)"
                           R"("states":[[[[1,0],[0,0]],[[0,0],[0,0]]],)"
                           R"([[[0,0],[0,0]],[[0,0],[1,0]]]]},)"
                           R"("w_z":{"kind":"cq","a_size":2,"out_dim":2,)"
                           R"("states":[[[[0.9,0],[0,0]],[[0,0],[0.1,0]]],)"
                           R"([[[0.1,0],[0,0]],[[0,0],[0.9,0]]]]}})");
  write(dir / "decode.json", std::string(R"({"code":")") + (dir / "packed_code.json").string() +
                                 R"(","channel":")" + (dir / "pair.json").string() +
                                 R"(","mode":"bcd","slack_a":-0.2,"slack_b":-0.1155})");
  CHECK(run("decode --config " + (dir / "decode.json").string() + " --out " + dir.string()) == 0);
  const std::string csv = slurp(dir / "decode.csv");
  CHECK(csv.find("y,") != std::string::npos);
  CHECK(csv.find("z,") != std::string::npos);
}

TEST_CASE("paperfig emits CSV and SVG pairs") {
  const fs::path dir = fresh_dir("fig");
  for (const std::string id : {"FF2", "FF3", "FF4", "PO1"}) {
    CHECK(run("paperfig --id " + id + " --out " + dir.string()) == 0);
    CHECK(fs::exists(dir / (id + ".csv")));
    CHECK(fs::exists(dir / (id + ".svg")));
  }
  const std::string ff2 = slurp(dir / "FF2.csv");
  CHECK(ff2.find("rate_bits") == 0);
}

TEST_CASE("exponent subcommand prints the breakdown") {
  const fs::path dir = fresh_dir("exp");
  CHECK(run("exponent --channel builtin:s2mac --variant mac-separate --ra 0.05 --rb 0.1 "
            "--sa 0.02 --sb 0.02 --out " +
            dir.string()) == 0);
  const std::string csv = slurp(dir / "exponent.csv");
  CHECK(csv.find("sender_a,exponent") != std::string::npos);
  CHECK(csv.find("sender_b,exponent") != std::string::npos);
  CHECK(csv.find("joint_detection") != std::string::npos);
}
