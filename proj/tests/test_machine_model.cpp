#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ecmkit/errors.hpp"
#include "ecmkit/machine_model.hpp"

using namespace ecmkit;

static std::string a64fx_path() {
    return std::string(ECMKIT_DATA_DIR) + "/machines/a64fx_fx1000.mm";
}

TEST_CASE("shipped a64fx model reproduces the machine table") {
    MachineModel m = load_machine_model(a64fx_path());
    CHECK(m.name == "a64fx_fx1000");
    CHECK(m.clock_hz == 2.2e9);
    CHECK(m.simd_bytes == 64);
    CHECK(m.cores_per_domain == 12);
    CHECK(m.num_domains == 4);
    CHECK(m.peak_flops == 3379.2e9);
    CHECK(m.mem_bw_readonly_domain == 227e9);
    CHECK(m.mem_bw_triad_domain == 213e9);
    CHECK(m.mem_bw_readonly_chip == 859e9);
    CHECK(m.mem_bw_triad_chip == 841e9);

    const MemLevel& l1 = m.level("L1");
    CHECK(l1.capacity_bytes == 64 * 1024);
    CHECK(l1.line_bytes == 256);
    CHECK(l1.load_bw == 128);
    CHECK(l1.store_bw == 64);
    CHECK(l1.shared_by_cores == 1);

    const MemLevel& l2 = m.level("L2");
    CHECK(l2.capacity_bytes == 8 * 1024 * 1024);
    CHECK(l2.load_bw == 64);
    CHECK(l2.store_bw == 32);
    CHECK(l2.shared_by_cores == 12);
}

TEST_CASE("shipped a64fx model reproduces the instruction table") {
    MachineModel m = load_machine_model(a64fx_path());
    struct Row {
        const char* iclass;
        double recip, latency;
    };
    const Row rows[] = {
        {"load_std", 0.5, 11},
        {"load_gather_simple", 2.0, 11},
        {"load_gather_complex", 4.0, 11},
        {"load_gather_simple_plus_std", 3.5, 0},
        {"load_gather_complex_plus_std", 5.5, 0},
        {"store_std", 1.0, 0},
        {"fadd", 0.5, 9},
        {"fmad", 0.5, 9},
        {"fmla", 0.5, 9},
        {"fmul", 0.5, 9},
        {"fcadd", 1.0, 15},
        {"fcmla", 2.0, 16},
        {"fadda", 18.5, 72},
        {"faddv", 11.5, 49},
        {"predicate_while", 1.0, 1},
    };
    for (const Row& r : rows) {
        const InstructionSpec& spec = lookup_instruction(m, r.iclass);
        CHECK_MESSAGE(spec.recip_throughput_cy == r.recip, r.iclass);
        CHECK_MESSAGE(spec.latency_cy == r.latency, r.iclass);
    }
    // fcmla pressure is imbalanced towards FLA, two of three cycles.
    const InstructionSpec& fcmla = lookup_instruction(m, "fcmla");
    CHECK(fcmla.port_cycles.at("FLA") == doctest::Approx(4.0 / 3.0));
    CHECK(fcmla.port_cycles.at("FLB") == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("lookup of an unknown class lists known ones") {
    MachineModel m = load_machine_model(a64fx_path());
    try {
        lookup_instruction(m, "bogus");
        FAIL("expected validation_error");
    } catch (const validation_error& e) {
        std::string msg = e.what();
        CHECK(msg.find("bogus") != std::string::npos);
        CHECK(msg.find("fmla") != std::string::npos);
    }
}

TEST_CASE("serialization round-trips to an identical model") {
    MachineModel m = load_machine_model(a64fx_path());
    MachineModel again = parse_machine_model(serialize_machine_model(m), "roundtrip");
    CHECK(m == again);
}

TEST_CASE("capacity ordering is enforced") {
    MachineModel m = load_machine_model(a64fx_path());
    std::swap(m.levels[0].capacity_bytes, m.levels[1].capacity_bytes);
    try {
        parse_machine_model(serialize_machine_model(m), "swapped");
        FAIL("expected validation_error");
    } catch (const validation_error& e) {
        CHECK(std::string(e.what()).find("capacity") != std::string::npos);
    }
}

TEST_CASE("undeclared ports and bad throughput are rejected") {
    MachineModel m = load_machine_model(a64fx_path());
    m.instructions["fmla"].port_cycles["XYZ"] = 1.0;
    CHECK_THROWS_AS(parse_machine_model(serialize_machine_model(m), "badport"),
                    validation_error);

    MachineModel m2 = load_machine_model(a64fx_path());
    m2.instructions["fmla"].recip_throughput_cy = 0.0;
    CHECK_THROWS_AS(parse_machine_model(serialize_machine_model(m2), "badrt"),
                    validation_error);
}

TEST_CASE("the 2.0 GHz operating point differs only in clock") {
    MachineModel fast = load_machine_model(a64fx_path());
    MachineModel slow =
        load_machine_model(std::string(ECMKIT_DATA_DIR) + "/machines/a64fx_fx1000_2ghz.mm");
    CHECK(slow.clock_hz == 2.0e9);
    CHECK(slow.instructions == fast.instructions);
    CHECK(slow.levels == fast.levels);
}
