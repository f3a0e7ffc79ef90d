#include "partforge/learn/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include <json.hpp>

namespace partforge::learn {

using nlohmann::json;

namespace {

constexpr char kMagic[8] = {'P', 'F', 'C', 'K', 'P', 'T', '0', '1'};

struct Array {
  std::string name;
  std::span<const float> data;
};

void write_checkpoint(const std::string& path, json header, std::span<const Array> arrays) {
  json list = json::array();
  for (const Array& a : arrays) list.push_back({{"name", a.name}, {"count", a.data.size()}});
  header["arrays"] = list;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out.write(kMagic, sizeof kMagic);
  out << header.dump() << '\n';
  for (const Array& a : arrays) {
    for (float f : a.data) {
      std::uint32_t bits = std::bit_cast<std::uint32_t>(f);
      if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap32(bits);
      char bytes[4];
      std::memcpy(bytes, &bits, 4);
      out.write(bytes, 4);
    }
  }
  if (!out) throw Error(ErrorCode::IoError, "failed writing " + path);
}

struct Parsed {
  json header;
  std::map<std::string, std::vector<float>> arrays;
};

Parsed read_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  char magic[8] = {};
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw Error(ErrorCode::SchemaVersionMismatch, path + " is not a checkpoint");
  }
  std::string line;
  std::getline(in, line);
  Parsed p;
  try {
    p.header = json::parse(line);
    for (const json& a : p.header.at("arrays")) {
      const auto count = a.at("count").get<std::size_t>();
      std::vector<float> values(count);
      for (float& f : values) {
        char bytes[4];
        in.read(bytes, 4);
        std::uint32_t bits;
        std::memcpy(&bits, bytes, 4);
        if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap32(bits);
        f = std::bit_cast<float>(bits);
      }
      if (!in) throw Error(ErrorCode::SchemaVersionMismatch, path + " is truncated");
      p.arrays[a.at("name").get<std::string>()] = std::move(values);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaVersionMismatch, path + ": bad header: " + e.what());
  }
  return p;
}

void copy_into(const std::vector<float>& src, std::span<float> dst, const std::string& what) {
  if (src.size() != dst.size()) {
    throw Error(ErrorCode::SchemaVersionMismatch, what + " has the wrong parameter count");
  }
  std::copy(src.begin(), src.end(), dst.begin());
}

const std::vector<float>& array(const Parsed& p, const std::string& name) {
  auto it = p.arrays.find(name);
  if (it == p.arrays.end()) throw Error(ErrorCode::SchemaVersionMismatch, "missing array " + name);
  return it->second;
}

void check_kind(const json& header, const std::string& kind) {
  if (header.value("kind", "") != kind || header.value("version", 0) != 1) {
    throw Error(ErrorCode::SchemaVersionMismatch, "expected a " + kind + " checkpoint");
  }
}

}  // namespace

void save_qnet(const std::string& path, const QNet& net, const env::ActionCaps& caps,
               const CheckpointMeta& meta) {
  json h = {{"kind", "qnet"},
            {"version", 1},
            {"input", net.shape().input},
            {"hidden", net.shape().hidden},
            {"actions", net.shape().actions},
            {"caps", {caps.parts, caps.connections, caps.orientations}},
            {"meta", meta}};
  const Array arrays[] = {{"trunk", net.trunk().parameters()}, {"head", net.head_parameters()}};
  write_checkpoint(path, h, arrays);
}

LoadedQNet load_qnet(const std::string& path) {
  const Parsed p = read_checkpoint(path);
  try {
    check_kind(p.header, "qnet");
    const QNetShape shape{p.header.at("input").get<int>(),
                          p.header.at("hidden").get<std::vector<int>>(),
                          p.header.at("actions").get<std::int64_t>()};
    const auto caps = p.header.at("caps").get<std::vector<int>>();
    if (caps.size() != 3) throw Error(ErrorCode::SchemaVersionMismatch, "caps need 3 values");
    LoadedQNet out{QNet(shape, 0), {caps[0], caps[1], caps[2]},
                   p.header.at("meta").get<CheckpointMeta>()};
    if (out.caps.action_count() != shape.actions) {
      throw Error(ErrorCode::CapMismatch, "checkpoint caps do not match its output size");
    }
    copy_into(array(p, "trunk"), out.net.trunk().parameters(), "trunk");
    copy_into(array(p, "head"), out.net.head_parameters(), "head");
    return out;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaVersionMismatch, path + ": bad header: " + e.what());
  }
}

void save_autoencoder(const std::string& path, const Autoencoder& ae,
                      const CheckpointMeta& meta) {
  json h = {{"kind", "autoencoder"},
            {"version", 1},
            {"encoder", ae.shape().encoder},
            {"decoder_hidden", ae.shape().decoder_hidden},
            {"points", ae.shape().points},
            {"meta", meta}};
  const Array arrays[] = {{"encoder", ae.encoder().parameters()},
                          {"decoder", ae.decoder().parameters()}};
  write_checkpoint(path, h, arrays);
}

LoadedAutoencoder load_autoencoder(const std::string& path) {
  const Parsed p = read_checkpoint(path);
  try {
    check_kind(p.header, "autoencoder");
    AeShape shape;
    shape.encoder = p.header.at("encoder").get<std::vector<int>>();
    shape.decoder_hidden = p.header.at("decoder_hidden").get<std::vector<int>>();
    shape.points = p.header.at("points").get<int>();
    LoadedAutoencoder out{Autoencoder(shape, 0), p.header.at("meta").get<CheckpointMeta>()};
    copy_into(array(p, "encoder"), out.ae.encoder().parameters(), "encoder");
    copy_into(array(p, "decoder"), out.ae.decoder().parameters(), "decoder");
    return out;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaVersionMismatch, path + ": bad header: " + e.what());
  }
}

}  // namespace partforge::learn
