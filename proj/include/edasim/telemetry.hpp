#pragma once

#include <cstdint>
#include <vector>

#include "edasim/engine.hpp"

namespace edasim {

// Wire format (see telemetry.md for the normative byte layout):
//   magic 0x45 0x44 | version 0x01 | flags (bit0 = batched) | seq u16 LE |
//   t0_ms u32 LE | count u8 | count * { conductance_q u16 LE, setting u8 } |
//   crc16 CCITT-FALSE big-endian over all preceding bytes.
// conductance_q is fixed point, 0.01 µS per unit.
struct TelemetrySample {
  uint16_t conductance_q = 0;
  uint8_t setting_index = 0;
  bool operator==(const TelemetrySample&) const = default;
};

struct TelemetryPacket {
  uint8_t version = 1;
  bool batched = false;
  uint16_t seq = 0;
  uint32_t t0_ms = 0;
  std::vector<TelemetrySample> samples;  // 1 entry, or up to 120 when batched

  size_t wire_size() const { return 11 + 3 * samples.size() + 2; }
  bool operator==(const TelemetryPacket&) const = default;
};

constexpr uint8_t kTelemetryMagic0 = 0x45;
constexpr uint8_t kTelemetryMagic1 = 0x44;
constexpr uint8_t kTelemetryVersion = 1;
constexpr int kBatchSamples = 120;
constexpr double kConductanceLsbUs = 0.01;
constexpr double kMaxEncodableUs = 655.35;  // u16 fixed-point ceiling

// CRC-16/CCITT-FALSE: poly 0x1021, init 0xFFFF, no reflection, no xor-out.
uint16_t crc16_ccitt_false(const uint8_t* data, size_t len);

uint16_t quantize_conductance(double conductance_us);  // rejects <0 or >655.35

// Build one packet from a run of acquisition records. PerSample mode takes
// exactly one record; batched mode 1..120. Rejects out-of-range conductance
// before any truncation can occur.
TelemetryPacket make_packet(const AcquisitionRecord* records, size_t count, uint16_t seq,
                            bool batched);
std::vector<TelemetryPacket> packetize(const std::vector<AcquisitionRecord>& records,
                                       TxMode mode, uint16_t first_seq = 0);

std::vector<uint8_t> encode(const TelemetryPacket& packet);

enum class DecodeStatus { Ok, BadMagic, BadLength, BadCrc, BadVersion };

const char* to_string(DecodeStatus status);

struct DecodeResult {
  DecodeStatus status = DecodeStatus::Ok;
  TelemetryPacket packet;  // valid only when status == Ok
};

// Validation order: minimum size, then CRC over the whole buffer, then magic,
// version, and count/length consistency. Checking the CRC before the header
// fields means any single corrupted bit in a well-sized packet reports BadCrc.
DecodeResult decode(const uint8_t* data, size_t len);
inline DecodeResult decode(const std::vector<uint8_t>& buf) { return decode(buf.data(), buf.size()); }

// Split a byte stream of concatenated packets (each self-describing via its
// count byte). Stops with BadLength on a trailing fragment.
struct StreamDecodeResult {
  std::vector<TelemetryPacket> packets;
  DecodeStatus status = DecodeStatus::Ok;  // first non-Ok status, if any
};
StreamDecodeResult decode_stream(const std::vector<uint8_t>& buf);

// Seedable lossy channel: each packet dropped independently with
// drop_probability. Deterministic for a fixed seed.
struct ChannelModel {
  double drop_probability = 0.0;
  uint64_t rng_seed = 1;
};

struct SeqGap {
  uint16_t first_missing = 0;
  uint16_t count = 0;
};

struct ChannelStats {
  size_t sent = 0;
  size_t dropped = 0;
  std::vector<SeqGap> gap_list;  // reconstructed purely from received seqs
};

struct ChannelResult {
  std::vector<TelemetryPacket> delivered;
  ChannelStats stats;
};

// Requires strictly increasing seq (mod 2^16); gap detection handles single
// wraps.
ChannelResult run_channel(const std::vector<TelemetryPacket>& packets, const ChannelModel& channel);

}  // namespace edasim
