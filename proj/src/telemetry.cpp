#include "edasim/telemetry.hpp"

#include <cmath>
#include <cstring>
#include <string>

#include "edasim/errors.hpp"

namespace edasim {

namespace {

struct Crc16Table {
  uint16_t entry[256];
  Crc16Table() {
    for (int i = 0; i < 256; i++) {
      uint16_t crc = static_cast<uint16_t>(i << 8);
      for (int b = 0; b < 8; b++)
        crc = (crc & 0x8000) ? static_cast<uint16_t>((crc << 1) ^ 0x1021)
                             : static_cast<uint16_t>(crc << 1);
      entry[i] = crc;
    }
  }
};

}  // namespace

uint16_t crc16_ccitt_false(const uint8_t* data, size_t len) {
  static const Crc16Table table;
  uint16_t crc = 0xFFFF;
  for (size_t i = 0; i < len; i++)
    crc = static_cast<uint16_t>((crc << 8) ^ table.entry[((crc >> 8) ^ data[i]) & 0xFF]);
  return crc;
}

uint16_t quantize_conductance(double conductance_us) {
  if (conductance_us < 0.0)
    throw ConfigError("telemetry: conductance must be >= 0");
  if (conductance_us > kMaxEncodableUs)
    throw ConfigError("telemetry: conductance " + std::to_string(conductance_us) +
                      " µS exceeds the fixed-point ceiling of 655.35 µS");
  return static_cast<uint16_t>(std::llround(conductance_us / kConductanceLsbUs));
}

TelemetryPacket make_packet(const AcquisitionRecord* records, size_t count, uint16_t seq,
                            bool batched) {
  if (count == 0) throw ConfigError("telemetry: packet needs at least one sample");
  if (!batched && count != 1) throw ConfigError("telemetry: per-sample packets carry one sample");
  if (count > static_cast<size_t>(kBatchSamples))
    throw ConfigError("telemetry: at most 120 samples per packet");
  TelemetryPacket pkt;
  pkt.batched = batched;
  pkt.seq = seq;
  pkt.t0_ms = static_cast<uint32_t>(records[0].t_ms);
  pkt.samples.reserve(count);
  for (size_t i = 0; i < count; i++) {
    TelemetrySample s;
    s.conductance_q = quantize_conductance(records[i].reconstructed_conductance_us);
    s.setting_index = static_cast<uint8_t>(records[i].setting_index);
    pkt.samples.push_back(s);
  }
  return pkt;
}

std::vector<TelemetryPacket> packetize(const std::vector<AcquisitionRecord>& records, TxMode mode,
                                       uint16_t first_seq) {
  std::vector<TelemetryPacket> out;
  uint16_t seq = first_seq;
  if (mode == TxMode::PerSample) {
    out.reserve(records.size());
    for (const auto& rec : records) out.push_back(make_packet(&rec, 1, seq++, false));
  } else {
    for (size_t i = 0; i < records.size(); i += kBatchSamples) {
      size_t count = std::min(records.size() - i, static_cast<size_t>(kBatchSamples));
      out.push_back(make_packet(&records[i], count, seq++, true));
    }
  }
  return out;
}

std::vector<uint8_t> encode(const TelemetryPacket& packet) {
  if (packet.samples.empty() || packet.samples.size() > static_cast<size_t>(kBatchSamples))
    throw ConfigError("telemetry: sample count out of range");
  if (!packet.batched && packet.samples.size() != 1)
    throw ConfigError("telemetry: per-sample packets carry one sample");

  std::vector<uint8_t> buf;
  buf.reserve(packet.wire_size());
  buf.push_back(kTelemetryMagic0);
  buf.push_back(kTelemetryMagic1);
  buf.push_back(packet.version);
  buf.push_back(packet.batched ? 0x01 : 0x00);
  buf.push_back(static_cast<uint8_t>(packet.seq & 0xFF));
  buf.push_back(static_cast<uint8_t>(packet.seq >> 8));
  for (int i = 0; i < 4; i++) buf.push_back(static_cast<uint8_t>((packet.t0_ms >> (8 * i)) & 0xFF));
  buf.push_back(static_cast<uint8_t>(packet.samples.size()));
  for (const auto& s : packet.samples) {
    buf.push_back(static_cast<uint8_t>(s.conductance_q & 0xFF));
    buf.push_back(static_cast<uint8_t>(s.conductance_q >> 8));
    buf.push_back(s.setting_index);
  }
  uint16_t crc = crc16_ccitt_false(buf.data(), buf.size());
  buf.push_back(static_cast<uint8_t>(crc >> 8));  // big-endian on the wire
  buf.push_back(static_cast<uint8_t>(crc & 0xFF));
  return buf;
}

const char* to_string(DecodeStatus status) {
  switch (status) {
    case DecodeStatus::Ok: return "Ok";
    case DecodeStatus::BadMagic: return "BadMagic";
    case DecodeStatus::BadLength: return "BadLength";
    case DecodeStatus::BadCrc: return "BadCrc";
    case DecodeStatus::BadVersion: return "BadVersion";
  }
  return "?";
}

DecodeResult decode(const uint8_t* data, size_t len) {
  DecodeResult result;
  const size_t min_size = 11 + 3 + 2;  // one-sample packet
  if (len < min_size) {
    result.status = DecodeStatus::BadLength;
    return result;
  }
  // CRC over the whole buffer first: any flipped bit in a well-sized packet
  // is reported as BadCrc regardless of which field it landed in.
  uint16_t expect = static_cast<uint16_t>((data[len - 2] << 8) | data[len - 1]);
  if (crc16_ccitt_false(data, len - 2) != expect) {
    result.status = DecodeStatus::BadCrc;
    return result;
  }
  if (data[0] != kTelemetryMagic0 || data[1] != kTelemetryMagic1) {
    result.status = DecodeStatus::BadMagic;
    return result;
  }
  if (data[2] != kTelemetryVersion) {
    result.status = DecodeStatus::BadVersion;
    return result;
  }
  uint8_t flags = data[3];
  uint8_t count = data[10];
  bool batched = (flags & 0x01) != 0;
  bool count_ok = batched ? (count >= 1 && count <= kBatchSamples) : (count == 1);
  if (!count_ok || len != 11 + 3 * static_cast<size_t>(count) + 2) {
    result.status = DecodeStatus::BadLength;
    return result;
  }

  TelemetryPacket pkt;
  pkt.version = data[2];
  pkt.batched = batched;
  pkt.seq = static_cast<uint16_t>(data[4] | (data[5] << 8));
  pkt.t0_ms = static_cast<uint32_t>(data[6]) | (static_cast<uint32_t>(data[7]) << 8) |
              (static_cast<uint32_t>(data[8]) << 16) | (static_cast<uint32_t>(data[9]) << 24);
  pkt.samples.resize(count);
  for (size_t i = 0; i < count; i++) {
    const uint8_t* p = data + 11 + 3 * i;
    pkt.samples[i].conductance_q = static_cast<uint16_t>(p[0] | (p[1] << 8));
    pkt.samples[i].setting_index = p[2];
  }
  result.packet = std::move(pkt);
  return result;
}

StreamDecodeResult decode_stream(const std::vector<uint8_t>& buf) {
  StreamDecodeResult out;
  size_t pos = 0;
  while (pos < buf.size()) {
    if (buf.size() - pos < 11) {
      out.status = DecodeStatus::BadLength;
      break;
    }
    size_t count = buf[pos + 10];
    size_t size = 11 + 3 * count + 2;
    if (buf.size() - pos < size) {
      out.status = DecodeStatus::BadLength;
      break;
    }
    DecodeResult one = decode(buf.data() + pos, size);
    if (one.status != DecodeStatus::Ok) {
      out.status = one.status;
      break;
    }
    out.packets.push_back(std::move(one.packet));
    pos += size;
  }
  return out;
}

ChannelResult run_channel(const std::vector<TelemetryPacket>& packets, const ChannelModel& channel) {
  if (channel.drop_probability < 0.0 || channel.drop_probability > 1.0)
    throw ConfigError("channel.drop_probability: must be in [0, 1]");
  for (size_t i = 1; i < packets.size(); i++) {
    auto delta = static_cast<uint16_t>(packets[i].seq - packets[i - 1].seq);
    if (delta == 0) throw ConfigError("channel: packet seq must be strictly increasing mod 2^16");
  }

  // Drop decision from a raw 32-bit draw so the stream is identical on every
  // platform for a given seed.
  uint64_t state = channel.rng_seed;
  auto draw32 = [&state]() {
    state += 0x9e3779b97f4a7c15ULL;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return static_cast<uint32_t>(z >> 32);
  };
  auto threshold = static_cast<uint64_t>(channel.drop_probability * 4294967296.0);

  ChannelResult result;
  result.stats.sent = packets.size();
  for (const auto& pkt : packets) {
    bool drop = static_cast<uint64_t>(draw32()) < threshold;
    if (!drop) result.delivered.push_back(pkt);
  }
  result.stats.dropped = result.stats.sent - result.delivered.size();

  for (size_t i = 1; i < result.delivered.size(); i++) {
    auto delta = static_cast<uint16_t>(result.delivered[i].seq - result.delivered[i - 1].seq);
    if (delta > 1) {
      SeqGap gap;
      gap.first_missing = static_cast<uint16_t>(result.delivered[i - 1].seq + 1);
      gap.count = static_cast<uint16_t>(delta - 1);
      result.stats.gap_list.push_back(gap);
    }
  }
  return result;
}

}  // namespace edasim
