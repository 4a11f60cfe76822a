#include <catch2/catch_amalgamated.hpp>

#include "polydeg/fixtures.hpp"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

namespace {

struct RunResult {
  int status = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  std::string cmd = std::string(POLYDEG_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  std::array<char, 4096> buf;
  while (fgets(buf.data(), buf.size(), pipe)) r.out += buf.data();
  int rc = pclose(pipe);
  r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return r;
}

std::string write_temp(const std::string& name, const std::string& text) {
  std::string path = std::string("/tmp/polydeg_cli_") + name;
  std::ofstream out(path);
  out << text;
  return path;
}

}  // namespace

TEST_CASE("parse command") {
  auto path = write_temp("fig1.game", polydeg::fixtures::kFig1);
  auto r = run("parse " + path);
  CHECK(r.status == 0);
  CHECK(r.out.find("PLAYERS 2") != std::string::npos);
  CHECK(r.out.find("TERMINALS 6") != std::string::npos);
  CHECK(r.out.find("RECALL ok") != std::string::npos);
}

TEST_CASE("parse failures report an error class and exit 1") {
  auto bad = write_temp("bad.game", "players 1\nnode a player 1 infoset u\n  action x -> zz\nroot a\n");
  auto r = run("parse " + bad);
  CHECK(r.status == 1);
  CHECK(r.out.find("ERROR DanglingReference:") != std::string::npos);

  auto amd = write_temp("amd.game", polydeg::fixtures::kAbsentMinded);
  auto r2 = run("parse " + amd);
  CHECK(r2.status == 1);
  CHECK(r2.out.find("ERROR PerfectRecallViolation:") != std::string::npos);

  auto r3 = run("parse /no/such/file.game");
  CHECK(r3.status == 1);
}

TEST_CASE("enabling command lists sequences and polytopes") {
  auto path = write_temp("fig1b.game", polydeg::fixtures::kFig1);
  auto r = run("enabling " + path);
  CHECK(r.status == 0);
  CHECK(r.out.find("SEQUENCES 1 5") != std::string::npos);
  CHECK(r.out.find("LASTACTIONS 1 3") != std::string::npos);
  CHECK(r.out.find("LASTACTIONS 2 4") != std::string::npos);
  CHECK(r.out.find("POLYTOPE 2 dim=2 vertices=4") != std::string::npos);
}

TEST_CASE("equilibria machine output has only key-value lines") {
  auto path = write_temp("gy1.game", polydeg::fixtures::kGy1);
  auto r = run("equilibria " + path + " --form enabling --machine");
  CHECK(r.status == 0);
  std::istringstream in(r.out);
  std::string line;
  int comps = 0;
  while (std::getline(in, line)) {
    REQUIRE_FALSE(line.empty());
    std::string key = line.substr(0, line.find(' '));
    bool upper = true;
    for (char ch : key) upper = upper && (std::isupper(ch) || std::isdigit(ch));
    CHECK(upper);
    if (key == "COMPONENT") ++comps;
  }
  CHECK(comps == 2);
}

TEST_CASE("degree command with a component file") {
  auto path = write_temp("gy1c.game", polydeg::fixtures::kGy1);
  // the BL point in enabling coordinates: p1=(T,B)=(0,1), p2=(L,R)=(1,0)
  auto comp = write_temp("bl.comp", "component BL\npoint 0 1 1 0\n");
  auto r = run("degree " + path + " --component " + comp + " --method gw --machine");
  CHECK(r.status == 0);
  CHECK(r.out.find("DEGREE gw BL +1") != std::string::npos);
  CHECK(r.out.find("CERT det_min=") != std::string::npos);

  auto rpf = run("degree " + path + " --component " + comp + " --method pf --machine");
  CHECK(rpf.status == 0);
  CHECK(rpf.out.find("DEGREE pf BL +1") != std::string::npos);

  // km takes mixed coordinates: sigma1 over (T,B), sigma2 over (L,R)
  auto kcomp = write_temp("blk.comp", "component BL\npoint 0 1 1 0\nradius 0.05\n");
  auto rkm = run("degree " + path + " --component " + kcomp + " --method km --machine");
  CHECK(rkm.status == 0);
  CHECK(rkm.out.find("DEGREE km BL +1") != std::string::npos);
}

TEST_CASE("degree of the T component through a multi-point component file") {
  auto path = write_temp("gy1d.game", polydeg::fixtures::kGy1);
  auto comp = write_temp("t.comp", "component T\npoint 1 0 0 1\npoint 1 0 0.5 0.5\n");
  auto r = run("degree " + path + " --component " + comp + " --method gw --machine");
  CHECK(r.status == 0);
  CHECK(r.out.find("DEGREE gw T 0") != std::string::npos);
  CHECK(r.out.find("EPS ") != std::string::npos);
}

TEST_CASE("exhausted resample budget exits with the inconclusive code") {
  auto path = write_temp("gy1e.game", polydeg::fixtures::kGy1);
  auto comp = write_temp("bl2.comp", "component BL\npoint 0 1 1 0\n");
  auto r = run("degree " + path + " --component " + comp + " --method gw --max-resamples 0");
  CHECK(r.status == 2);
  CHECK(r.out.find("ERROR Inconclusive:") != std::string::npos);
}

TEST_CASE("check-plus-one") {
  auto path = write_temp("bq.game", polydeg::fixtures::kBeerQuiche);
  auto r = run("check-plus-one " + path + " --method gw --machine");
  CHECK(r.status == 0);
  CHECK(r.out.find("TOTAL +1") != std::string::npos);
}

TEST_CASE("examples commands pass") {
  for (std::string name : {"beerquiche", "gw", "fig1"}) {
    auto r = run("examples " + name);
    INFO(r.out);
    CHECK(r.status == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
  }
  auto r = run("examples beerquiche");
  CHECK(r.out.find("DEGREE gw pooling-beer +1") != std::string::npos);
  CHECK(r.out.find("DEGREE gw pooling-quiche 0") != std::string::npos);
}

TEST_CASE("reports are byte-stable for a fixed seed") {
  auto path = write_temp("bq2.game", polydeg::fixtures::kBeerQuiche);
  auto a = run("equilibria " + path + " --form enabling --machine --seed 3");
  auto b = run("equilibria " + path + " --form enabling --machine --seed 3");
  CHECK(a.out == b.out);

  // sender (B_s,Q_s,B_w,Q_w) pools on beer; receiver (NF_B,F_B,NF_Q,F_Q)
  auto comp = write_temp("bq2.comp",
                         "component pooling-beer\npoint 1 0 1 0 1 0 0 1\npoint 1 0 1 0 1 0 0.5 "
                         "0.5\nradius 0.05\n");
  auto c = run("degree " + path + " --component " + comp + " --method gw --machine --seed 5");
  auto d = run("degree " + path + " --component " + comp + " --method gw --machine --seed 5");
  CHECK(c.status == 0);
  CHECK(c.out == d.out);

  // the environment variable selects the default seed
  std::string env = std::string("POLYDEG_SEED=5 ") + POLYDEG_CLI_PATH + " degree " + path +
                    " --component " + comp + " --method gw --machine";
  FILE* pipe = popen((env + " 2>&1").c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf;
  while (fgets(buf.data(), buf.size(), pipe)) out += buf.data();
  pclose(pipe);
  CHECK(out == c.out);
}

TEST_CASE("equilibria in reduced form") {
  auto path = write_temp("fig1r.game", polydeg::fixtures::kFig1);
  auto r = run("equilibria " + path + " --form reduced --machine");
  CHECK(r.status == 0);
  CHECK(r.out.find("COMPONENT") != std::string::npos);
}
