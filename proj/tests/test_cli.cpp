#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(RWRTOPK_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf{};
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("rwrtopk_cli_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("precompute, query and oracle agree on a two-cycle") {
  TempDir dir;
  std::ofstream(dir.file("g.txt")) << "1 2\n2 1\n";
  auto pre = run("precompute --graph " + dir.file("g.txt") + " --out " + dir.file("g.idx"));
  REQUIRE(pre.code == 0);
  CHECK(pre.out.rfind("order=hybrid n=2 m=2", 0) == 0);
  CHECK(pre.out.find("nnz_linv=3 nnz_uinv=3") != std::string::npos);

  auto q = run("query --index " + dir.file("g.idx") + " --node 1 --k 2");
  REQUIRE(q.code == 0);
  auto ql = lines(q.out);
  REQUIRE(ql.size() == 3);
  CHECK(ql[0] == "1\t1\t0.952380952381");
  CHECK(ql[1] == "2\t2\t0.047619047619");
  CHECK(ql[2].rfind("# visited=2 computed=2", 0) == 0);

  auto o = run("oracle --graph " + dir.file("g.txt") + " --node 1 --k 2");
  REQUIRE(o.code == 0);
  auto ol = lines(o.out);
  REQUIRE(ol.size() == 3);
  CHECK(ol[0] == ql[0]);
  CHECK(ol[1] == ql[1]);
  CHECK(ol[2].find("converged=true") != std::string::npos);
}

TEST_CASE("exit codes") {
  TempDir dir;
  std::ofstream(dir.file("g.txt")) << "a b\nb c\nc a\n";
  REQUIRE(run("precompute --graph " + dir.file("g.txt") + " --out " + dir.file("g.idx")).code == 0);
  CHECK(run("query --index " + dir.file("g.idx") + " --node zzz").code == 2);
  CHECK(run("oracle --graph " + dir.file("g.txt") + " --node zzz").code == 2);
  CHECK(run("oracle --graph " + dir.file("g.txt") + " --node a --c 0.001 --max-iter 2").code == 3);
  CHECK(run("precompute --graph " + dir.file("g.txt") + " --out " + dir.file("x.idx") + " --c 1.5").code == 1);
  CHECK(run("precompute --graph " + dir.file("missing.txt") + " --out " + dir.file("x.idx")).code == 1);
  CHECK(run("query --index " + dir.file("g.txt") + " --node a").code == 1);  // not an index
  CHECK(run("").code == 1);

  std::ofstream(dir.file("bad.txt")) << "a b\nc\n";
  CHECK(run("precompute --graph " + dir.file("bad.txt") + " --out " + dir.file("x.idx")).code == 1);
}

TEST_CASE("pruned and unpruned query print the same ranking") {
  TempDir dir;
  REQUIRE(run("generate --gen planted:n=300,blocks=5,pin=0.1,pout=0.005,seed=4 --out " + dir.file("p.txt")).code == 0);
  REQUIRE(run("precompute --graph " + dir.file("p.txt") + " --out " + dir.file("p.idx") + " --order degree").code == 0);
  auto on = lines(run("query --index " + dir.file("p.idx") + " --node 7 --k 5").out);
  auto off = lines(run("query --index " + dir.file("p.idx") + " --node 7 --k 5 --no-prune").out);
  REQUIRE(on.size() == 6);
  REQUIRE(off.size() == 6);
  for (int i = 0; i < 5; ++i) CHECK(on[i] == off[i]);
  CHECK(off[5].find("terminated_at_layer=none") != std::string::npos);
}

TEST_CASE("bench writes a CSV") {
  TempDir dir;
  auto r = run("bench --gen planted:n=200,blocks=4,pin=0.1,pout=0.01,seed=1 --k 1,5 --order hybrid,random "
               "--seed 1,2 --queries 3 --out " + dir.file("b.csv"));
  REQUIRE(r.code == 0);
  std::ifstream in(dir.file("b.csv"));
  std::stringstream ss;
  ss << in.rdbuf();
  auto l = lines(ss.str());
  REQUIRE(l.size() == 1 + 2 * 2 * 2);
  CHECK(l[0].rfind("ordering,seed,k,n,m,kappa,nnz_linv,nnz_uinv,nnz_ratio", 0) == 0);
  CHECK(l[1].rfind("hybrid,1,1,200,", 0) == 0);
  CHECK(l.back().rfind("random,2,5,200,", 0) == 0);
}

TEST_CASE("partition output") {
  TempDir dir;
  std::ofstream(dir.file("g.txt")) << "0 1\n1 0\n0 2\n2 0\n1 2\n2 1\n"
                                      "3 4\n4 3\n3 5\n5 3\n4 5\n5 4\n"
                                      "2 3\n3 2\n";
  auto r = run("partition --graph " + dir.file("g.txt") + " --order cluster");
  REQUIRE(r.code == 0);
  CHECK(r.out == "0 1\n1 1\n2 3\n3 3\n4 2\n5 2\n");
}
