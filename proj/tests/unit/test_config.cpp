#include <doctest.h>

#include <sstream>

#include "odopt/config.hpp"
#include "odopt/error.hpp"

using namespace odopt;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::runtime;
}

std::string dump(const ExperimentConfig& c) {
  std::ostringstream os;
  write_config(os, c);
  return os.str();
}

}  // namespace

TEST_CASE("defaults describe the estimation setup") {
  const ExperimentConfig c;
  CHECK(c.n == 100);
  CHECK(c.T == 5000);
  CHECK(c.beta == 0.9);
  CHECK(c.k == 0.25);
  CHECK(c.graph.family == GraphFamily::erdos_renyi);
  CHECK(c.graph.p == 0.08);
  CHECK(c.scenario.theta_max == 0.5);
  CHECK(c.scenario.h_max == 0.25);
  CHECK(c.scenario.a_max == 1.0);
  CHECK(c.scenario.b_max == 0.25);
  CHECK_NOTHROW(validate_config(c));
}

TEST_CASE("presets") {
  ExperimentConfig c;
  c.out_dir = "keep";
  apply_preset(c, "fig3");
  CHECK(c.out_dir == "keep");
  CHECK(c.graph.family == GraphFamily::random_regular);
  CHECK(c.graph.k == 4);
  CHECK(c.jam_count == 25);
  CHECK(c.sweep_axis == "beta");
  CHECK(c.sweep_values == std::vector<std::string>{"0.9", "1"});

  apply_preset(c, "fig4");
  CHECK(c.jam_count == 0);
  CHECK(c.sweep_axis == "noise_family");
  CHECK(c.sweep_values.size() == 3);
  CHECK_FALSE(c.scenario.truncate);

  apply_preset(c, "fig5");
  CHECK(c.sweep_axis == "graph_family");
  CHECK(c.sweep_values == std::vector<std::string>{"path", "random_tree", "random_regular", "erdos_renyi"});

  apply_preset(c, "fig2");
  CHECK(c.sweep_axis.empty());
  CHECK(c.graph.family == GraphFamily::erdos_renyi);
  CHECK(c.preset == "fig2");

  CHECK(kind_of([&] { apply_preset(c, "fig9"); }) == ErrorKind::config);
}

TEST_CASE("ini loading") {
  ExperimentConfig c;
  std::istringstream in(
      "[run]\npreset = fig3\nT = 200\nseed = 7\n"
      "[scenario]\nb_max = 0.1\njammed = 1,4\n"
      "[bounds]\ngamma = 0.5\n"
      "[result]\nanything = goes\n");
  load_config(c, in);
  CHECK(c.preset == "fig3");
  CHECK(c.graph.family == GraphFamily::random_regular);
  CHECK(c.T == 200);
  CHECK(c.seed == 7);
  CHECK(c.scenario.b_max == 0.1);
  CHECK(c.jammed == std::vector<int>{1, 4});
  REQUIRE(c.gamma);
  CHECK(*c.gamma == 0.5);
}

TEST_CASE("bad config input") {
  ExperimentConfig c;
  auto load = [&](const std::string& text) {
    return kind_of([&] {
      std::istringstream in(text);
      load_config(c, in);
    });
  };
  CHECK(load("[run]\nbogus = 1\n") == ErrorKind::config);
  CHECK(load("[nowhere]\nn = 1\n") == ErrorKind::config);
  CHECK(load("[run]\nT = ten\n") == ErrorKind::config);
  CHECK(load("[run]\nT = 10x\n") == ErrorKind::config);
  CHECK(load("[run]\nadaptive = maybe\n") == ErrorKind::config);
  CHECK(load("[graph]\nfamily = hypercube\n") == ErrorKind::config);
  CHECK(load("[scenario]\nnoise = cauchy\n") == ErrorKind::config);
  CHECK(load("[schedule]\nmode = gossip\n") == ErrorKind::config);
  CHECK(load("[run]\npreset = fig7\n") == ErrorKind::config);
  CHECK(load("this is not ini [") == ErrorKind::config);
  CHECK(kind_of([&] { load_config(c, std::string("/nonexistent/x.ini")); }) == ErrorKind::config);
  CHECK(kind_of([&] { set_config_value(c, "run.beta", "") ; }) == ErrorKind::config);
}

TEST_CASE("cross-field validation") {
  auto bad = [](auto mutate) {
    ExperimentConfig c;
    mutate(c);
    return kind_of([&] { validate_config(c); });
  };
  CHECK(bad([](ExperimentConfig& c) { c.T = 0; }) == ErrorKind::config);
  CHECK(bad([](ExperimentConfig& c) { c.n = 0; }) == ErrorKind::config);
  CHECK(bad([](ExperimentConfig& c) { c.beta = 1.2; }) == ErrorKind::config);
  CHECK(bad([](ExperimentConfig& c) { c.k = 0.0; }) == ErrorKind::config);
  CHECK(bad([](ExperimentConfig& c) { c.jam_count = 101; }) == ErrorKind::config);
  CHECK(bad([](ExperimentConfig& c) { c.jammed = {0}; }) == ErrorKind::config);
  CHECK(bad([](ExperimentConfig& c) { c.schedule.delta = 0; }) == ErrorKind::config);
  CHECK(bad([](ExperimentConfig& c) { c.gamma = 1.0; }) == ErrorKind::config);
  CHECK(bad([](ExperimentConfig& c) { c.nu = 0; }) == ErrorKind::config);
}

TEST_CASE("written configs reload to the same configuration") {
  for (const char* preset : {"fig2", "fig3", "fig4", "fig5"}) {
    ExperimentConfig c;
    apply_preset(c, preset);
    set_config_value(c, "run.T", "321");
    set_config_value(c, "bounds.gamma", "0.25");
    set_config_value(c, "bounds.nu", "3");
    set_config_value(c, "scenario.jammed", "2,5");
    set_config_value(c, "graph.seed", "99");
    set_config_value(c, "run.audit", "on");
    const std::string first = dump(c);
    ExperimentConfig back;
    std::istringstream in(first);
    load_config(back, in);
    CAPTURE(preset);
    CHECK(dump(back) == first);
    CHECK(back.T == 321);
    CHECK(back.jammed == std::vector<int>{2, 5});
    CHECK(back.sweep_values == c.sweep_values);
  }
}

TEST_CASE("a cleared preset sweep stays cleared after reload") {
  ExperimentConfig c;
  apply_preset(c, "fig3");
  c.sweep_axis.clear();
  c.sweep_values.clear();
  std::istringstream in(dump(c));
  ExperimentConfig back;
  load_config(back, in);
  CHECK(back.preset == "fig3");
  CHECK(back.sweep_axis.empty());
  CHECK(back.sweep_values.empty());
}
