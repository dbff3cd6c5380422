#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "json.hpp"
#include "ymflow/io.hpp"

using namespace ymflow;

namespace {

const char* kSample = R"(# example run
[lattice]
dims = 6 x 4 x 4 x 4
boundary = frozen
frozen_depth = 1
twist = 100

[perturbation]
beta = 0.3
w0 = 0.5

[flow]
dtau = 0.02
tau_max = 1.5
integrator = rk3

[run]
seed = 42
initial = random
noise = 0.15
)";

} // namespace

TEST_CASE("config parsing reads every section and applies defaults") {
    std::istringstream in(kSample);
    RunConfig cfg = parse_config(in);
    CHECK(cfg.dims == std::array<int, 4>{6, 4, 4, 4});
    CHECK(cfg.low == BoundaryMode::Frozen);
    CHECK(cfg.high == BoundaryMode::Frozen);
    CHECK(cfg.frozen_depth == 1);
    CHECK(cfg.twist == std::array<int, 3>{1, 0, 0});
    CHECK(cfg.beta == 0.3);
    CHECK(cfg.w0 == 0.5);
    CHECK(cfg.schedule.dtau == 0.02);
    CHECK(cfg.schedule.tau_max == 1.5);
    CHECK(cfg.schedule.integrator == Integrator::RK3);
    CHECK(cfg.seed == 42);
    CHECK(cfg.initial == "random");
    CHECK(cfg.noise == 0.15);
    // defaults survive for unmentioned keys
    CHECK(cfg.rho == 2.0);
    CHECK(cfg.instanton_sign == 1);
    LatticeGeometry geo = cfg.make_geometry();
    CHECK(geo.n_sites() == 6 * 4 * 4 * 4);
    CHECK(geo.twist_bit(1, 2) == 1);
}

TEST_CASE("unknown keys are rejected with the offending line number") {
    std::istringstream in("[lattice]\ndims = 4 x 4 x 4 x 4\nbogus_key = 3\n");
    try {
        parse_config(in);
        FAIL("expected a parse error");
    } catch (const std::invalid_argument& e) {
        std::string msg = e.what();
        CHECK(msg.find("bogus_key") != std::string::npos);
        CHECK(msg.find("3") != std::string::npos); // line number
    }
}

TEST_CASE("serialize/parse round-trips the configuration") {
    std::istringstream in(kSample);
    RunConfig cfg = parse_config(in);
    std::string text = serialize_config(cfg);
    std::istringstream in2(text);
    RunConfig cfg2 = parse_config(in2);
    CHECK(serialize_config(cfg2) == text);
    CHECK(cfg2.dims == cfg.dims);
    CHECK(cfg2.beta == cfg.beta);
    CHECK(cfg2.seed == cfg.seed);
    CHECK(cfg2.schedule.tau_max == cfg.schedule.tau_max);
}

TEST_CASE("snapshot round-trips bit for bit") {
    LatticeGeometry geo({6, 4, 4, 4}, BoundaryMode::Frozen, BoundaryMode::Frozen, 1,
                        {1, 0, 0});
    LinkField U = random_near(flat_links(standard_flat_spec({1, 0, 0}), geo), 0.2, 11);
    std::stringstream buf;
    write_snapshot(buf, U);
    const LatticeGeometry* geo2 = nullptr;
    LinkField V = read_snapshot(buf, geo2);
    REQUIRE(geo2 != nullptr);
    CHECK(geo2->dims() == geo.dims());
    CHECK(geo2->twist() == geo.twist());
    REQUIRE(V.u.size() == U.u.size());
    for (size_t i = 0; i < U.u.size(); ++i) {
        CHECK(V.u[i].w == U.u[i].w);
        CHECK(V.u[i].x == U.u[i].x);
        CHECK(V.u[i].y == U.u[i].y);
        CHECK(V.u[i].z == U.u[i].z);
    }
}

TEST_CASE("corrupt snapshots are rejected") {
    std::stringstream buf("not a snapshot at all");
    const LatticeGeometry* geo = nullptr;
    CHECK_THROWS(read_snapshot(buf, geo));
}

TEST_CASE("flow csv has the pinned header and full precision") {
    std::vector<FlowSample> samples(1);
    samples[0].tau = 0.1;
    samples[0].action = 1.0 / 3.0;
    samples[0].ym_k = 0.5;
    samples[0].fplus_sq = 0.25;
    samples[0].cs_estimate = -0.125;
    samples[0].grad_norm_sq = 2.0;
    samples[0].q_charge = 0.75;
    samples[0].dtau = 0.01;
    std::ostringstream out;
    write_flow_csv(out, samples);
    std::string text = out.str();
    CHECK(text.rfind("tau,action,ym_k,fplus_sq,cs_estimate,grad_norm_sq,Q,dtau\n", 0) == 0);
    // 1/3 must survive a text round-trip exactly
    CHECK(text.find("0.33333333333333331") != std::string::npos);
}

TEST_CASE("summary json is valid and carries the expected schema") {
    std::istringstream in(kSample);
    RunConfig cfg = parse_config(in);
    LatticeGeometry geo = cfg.make_geometry();
    HolonomyPerturbation pert(geo, cfg.make_perturbation());
    LinkField U = random_near(flat_links(standard_flat_spec(cfg.twist), geo),
                              cfg.noise, static_cast<unsigned>(cfg.seed));
    FlowSchedule sched = cfg.schedule;
    sched.tau_max = 0.1;
    FlowTrace tr = run_flow(U, pert, sched);
    auto j = nlohmann::json::parse(summary_json(cfg, tr));
    CHECK(j["schema"] == 1);
    CHECK(j["lattice"]["dims"].size() == 4);
    CHECK(j["final"].contains("kappa"));
    CHECK(j["final"]["tau"].get<double>() == doctest::Approx(tr.samples.back().tau));
}
