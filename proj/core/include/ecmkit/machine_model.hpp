#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ecmkit {

/// One level of the memory hierarchy. `load_bw`/`store_bw` are the bytes per
/// cycle this level can move towards the next-lower level (closer to the
/// core): the L1 entry holds the register<->L1 bandwidths, the L2 entry the
/// L1<->L2 bandwidths. The MEM entry has capacity 0 (unbounded) and zero
/// per-cycle bandwidths; memory transfer rates come from the measured
/// mem_bw_* fields of the machine instead.
struct MemLevel {
    std::string name;           // L1 | L2 | MEM
    std::uint64_t capacity_bytes = 0;
    std::uint64_t line_bytes = 0;
    double load_bw = 0.0;       // bytes/cycle
    double store_bw = 0.0;      // bytes/cycle
    int shared_by_cores = 1;
};

enum class InstrKind { Load, Store, Compute, Predicate };

struct InstructionSpec {
    std::string iclass;
    InstrKind kind = InstrKind::Compute;
    double recip_throughput_cy = 0.0;
    double latency_cy = 0.0;                   // 0 when not applicable
    std::map<std::string, double> port_cycles; // port group -> cycles per instruction
};

struct MachineModel {
    std::string name;
    double clock_hz = 0.0;
    int simd_bytes = 0;
    int cores_per_domain = 0;
    int num_domains = 0;
    std::vector<MemLevel> levels;              // ordered low to high: L1, L2, MEM
    double mem_bw_readonly_domain = 0.0;       // bytes/s
    double mem_bw_triad_domain = 0.0;
    double mem_bw_readonly_chip = 0.0;
    double mem_bw_triad_chip = 0.0;
    double peak_flops = 0.0;
    std::vector<std::string> ports;
    std::map<std::string, InstructionSpec> instructions;

    const MemLevel& level(const std::string& name) const;
    bool has_level(const std::string& name) const;

    /// Domain-level memory bandwidth in bytes/cycle of one core, following
    /// the model's selection rule: read-only for load-dominated kernels,
    /// triad otherwise.
    double mem_bytes_per_cycle(bool load_dominated) const;
    double mem_bw_domain(bool load_dominated) const;
};

/// Parses and validates an ecmkit-machine/1 file. Throws validation_error
/// with line/field context on malformed input or violated invariants.
MachineModel load_machine_model(const std::string& path);
MachineModel parse_machine_model(const std::string& text, const std::string& source = "<string>");

/// Canonical text form; parse_machine_model(serialize_machine_model(m))
/// reproduces m exactly.
std::string serialize_machine_model(const MachineModel& m);

/// Throws validation_error naming the unknown class and listing known ones.
const InstructionSpec& lookup_instruction(const MachineModel& m, const std::string& iclass);

bool operator==(const MemLevel& a, const MemLevel& b);
bool operator==(const InstructionSpec& a, const InstructionSpec& b);
bool operator==(const MachineModel& a, const MachineModel& b);

} // namespace ecmkit
