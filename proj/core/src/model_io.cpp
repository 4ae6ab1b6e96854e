// SPDX-FileCopyrightText: 2026 graphfi authors
// SPDX-License-Identifier: Apache-2.0

#include "graphfi/model_io.hpp"

#include "graphfi/errors.hpp"
#include "graphfi/log.hpp"

#include <nlohmann/json.hpp>
#include <zlib.h>

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>

namespace graphfi {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr char kWeightsMagic[4] = {'G', 'F', 'I', 'W'};
constexpr uint16_t kWeightsVersion = 1;
constexpr const char* kGraphFormat = "graphfi.graph";
constexpr int kGraphVersion = 1;

// ---- little-endian primitives -------------------------------------------

void put_u16(std::string& buf, uint16_t v) {
    buf.push_back(static_cast<char>(v & 0xff));
    buf.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put_u32(std::string& buf, uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& buf, uint64_t v) {
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

struct Cursor {
    const uint8_t* data;
    size_t size;
    size_t pos = 0;
    std::string context;

    void need(size_t n) const {
        if (pos + n > size) {
            throw ParseError(context + ": truncated at offset " + std::to_string(pos));
        }
    }
    uint8_t u8() {
        need(1);
        return data[pos++];
    }
    uint16_t u16() {
        need(2);
        uint16_t v = static_cast<uint16_t>(data[pos]) |
                     static_cast<uint16_t>(static_cast<uint16_t>(data[pos + 1]) << 8);
        pos += 2;
        return v;
    }
    uint32_t u32() {
        need(4);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(data[pos + i]) << (8 * i);
        pos += 4;
        return v;
    }
    uint64_t u64() {
        need(8);
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(data[pos + i]) << (8 * i);
        pos += 8;
        return v;
    }
    std::string bytes(size_t n) {
        need(n);
        std::string s(reinterpret_cast<const char*>(data + pos), n);
        pos += n;
        return s;
    }
};

// ---- file helpers ---------------------------------------------------------

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path + "' for reading");
    }
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw IoError("read failure on '" + path + "'");
    }
    return content;
}

// Write-temp-then-rename so a crashed writer never leaves a half file.
void write_file_atomic(const std::string& path, const std::string& content) {
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot open '" + tmp.string() + "' for writing");
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) {
            throw IoError("write failure on '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot rename temp file onto '" + path + "'");
    }
}

// ---- tensor payload (little-endian element bytes) --------------------------

void put_tensor_payload(std::string& buf, const Tensor& t) {
    switch (t.dtype()) {
    case DType::F32:
        for (float v : t.as<float>()) put_u32(buf, std::bit_cast<uint32_t>(v));
        break;
    case DType::F64:
        for (double v : t.as<double>()) put_u64(buf, std::bit_cast<uint64_t>(v));
        break;
    case DType::I64:
        for (int64_t v : t.as<int64_t>()) put_u64(buf, std::bit_cast<uint64_t>(v));
        break;
    case DType::Bool:
        for (uint8_t v : t.as<uint8_t>()) buf.push_back(static_cast<char>(v));
        break;
    }
}

Tensor read_tensor_payload(Cursor& c, DType dtype, std::vector<int64_t> shape) {
    Tensor t(dtype, std::move(shape));
    switch (dtype) {
    case DType::F32:
        for (float& v : t.as<float>()) v = std::bit_cast<float>(c.u32());
        break;
    case DType::F64:
        for (double& v : t.as<double>()) v = std::bit_cast<double>(c.u64());
        break;
    case DType::I64:
        for (int64_t& v : t.as<int64_t>()) v = std::bit_cast<int64_t>(c.u64());
        break;
    case DType::Bool:
        for (uint8_t& v : t.as<uint8_t>()) {
            v = c.u8();
            if (v > 1) {
                throw ParseError(c.context + ": Bool element is neither 0 nor 1");
            }
        }
        break;
    }
    return t;
}

// ---- graph JSON -------------------------------------------------------------

json attr_to_json(const Attr& a) {
    if (const auto* i = std::get_if<int64_t>(&a)) return *i;
    if (const auto* v = std::get_if<std::vector<int64_t>>(&a)) return *v;
    return std::get<std::string>(a);
}

Attr attr_from_json(const std::string& node_id, const std::string& key, const json& j) {
    if (j.is_number_integer()) return j.get<int64_t>();
    if (j.is_string()) return j.get<std::string>();
    if (j.is_array()) {
        std::vector<int64_t> v;
        for (const auto& e : j) {
            if (!e.is_number_integer()) {
                throw ParseError("node '" + node_id + "' attr '" + key +
                                 "' must be an all-integer array");
            }
            v.push_back(e.get<int64_t>());
        }
        return v;
    }
    throw ParseError("node '" + node_id + "' attr '" + key +
                     "' must be an integer, string, or integer array");
}

size_t line_of_offset(const std::string& text, size_t offset) {
    size_t line = 1;
    for (size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') ++line;
    }
    return line;
}

} // namespace

std::string graph_to_json(const Graph& g) {
    json doc;
    doc["format"] = kGraphFormat;
    doc["version"] = kGraphVersion;
    doc["nodes"] = json::array();
    for (const Node& n : g.nodes()) {
        json jn;
        jn["id"] = n.id;
        jn["op"] = op_kind_name(n.kind);
        jn["inputs"] = n.inputs;
        json attrs = json::object();
        for (const auto& [key, value] : n.attrs) {
            attrs[key] = attr_to_json(value);
        }
        jn["attrs"] = std::move(attrs);
        jn["injectable"] = n.injectable;
        doc["nodes"].push_back(std::move(jn));
    }
    doc["outputs"] = g.outputs();
    return doc.dump(2) + "\n";
}

GraphDef graph_def_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("graph doc: parse error at line " +
                         std::to_string(line_of_offset(text, e.byte)) + " (byte " +
                         std::to_string(e.byte) + "): " + e.what());
    }
    if (!doc.is_object() || doc.value("format", "") != kGraphFormat) {
        throw ParseError("graph doc: missing or wrong 'format' marker");
    }
    if (doc.value("version", 0) != kGraphVersion) {
        throw ParseError("graph doc: unsupported version");
    }
    if (!doc.contains("nodes") || !doc["nodes"].is_array()) {
        throw ParseError("graph doc: 'nodes' array is missing");
    }

    GraphDef def;
    for (const auto& jn : doc["nodes"]) {
        if (!jn.is_object() || !jn.contains("id") || !jn.contains("op")) {
            throw ParseError("graph doc: every node needs 'id' and 'op'");
        }
        Node n;
        n.id = jn["id"].get<std::string>();
        const std::string op = jn["op"].get<std::string>();
        const auto kind = op_kind_from_name(op);
        if (!kind) {
            throw ParseError("node '" + n.id + "': unknown op '" + op + "'");
        }
        n.kind = *kind;
        if (jn.contains("inputs")) {
            for (const auto& in : jn["inputs"]) {
                n.inputs.push_back(in.get<std::string>());
            }
        }
        if (jn.contains("attrs")) {
            for (const auto& [key, value] : jn["attrs"].items()) {
                n.attrs.emplace(key, attr_from_json(n.id, key, value));
            }
        }
        const bool source = n.kind == OpKind::Const || n.kind == OpKind::Placeholder;
        n.injectable = jn.value("injectable", !source);
        def.nodes.push_back(std::move(n));
    }
    if (doc.contains("outputs")) {
        for (const auto& out : doc["outputs"]) {
            def.outputs.push_back(out.get<std::string>());
        }
    }
    return def;
}

void save_tensors(const std::string& path,
                  const std::vector<std::pair<std::string, Tensor>>& entries) {
    std::string buf;
    buf.append(kWeightsMagic, sizeof(kWeightsMagic));
    put_u16(buf, kWeightsVersion);
    put_u32(buf, static_cast<uint32_t>(entries.size()));
    for (const auto& [id, t] : entries) {
        if (id.size() > std::numeric_limits<uint16_t>::max()) {
            throw IoError("tensor id too long: '" + id.substr(0, 32) + "...'");
        }
        put_u16(buf, static_cast<uint16_t>(id.size()));
        buf.append(id);
        buf.push_back(static_cast<char>(t.dtype()));
        if (t.rank() > std::numeric_limits<uint8_t>::max()) {
            throw IoError("tensor rank too large for entry '" + id + "'");
        }
        buf.push_back(static_cast<char>(t.rank()));
        for (int64_t e : t.shape()) {
            if (e > std::numeric_limits<uint32_t>::max()) {
                throw IoError("tensor extent too large for entry '" + id + "'");
            }
            put_u32(buf, static_cast<uint32_t>(e));
        }
        put_tensor_payload(buf, t);
    }
    const uint32_t crc = static_cast<uint32_t>(
        crc32(0, reinterpret_cast<const Bytef*>(buf.data()), static_cast<uInt>(buf.size())));
    put_u32(buf, crc);
    write_file_atomic(path, buf);
}

std::vector<std::pair<std::string, Tensor>> load_tensors(const std::string& path) {
    const std::string content = read_file(path);
    if (content.size() < sizeof(kWeightsMagic) + 2 + 4 + 4) {
        throw ParseError("'" + path + "': too short to be a tensor store");
    }
    if (std::memcmp(content.data(), kWeightsMagic, sizeof(kWeightsMagic)) != 0) {
        throw ParseError("'" + path + "': bad magic (expected GFIW)");
    }

    const size_t payload_size = content.size() - 4;
    const uint32_t stored_crc = [&] {
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) {
            v |= static_cast<uint32_t>(static_cast<uint8_t>(content[payload_size + i])) << (8 * i);
        }
        return v;
    }();
    const uint32_t actual_crc = static_cast<uint32_t>(
        crc32(0, reinterpret_cast<const Bytef*>(content.data()), static_cast<uInt>(payload_size)));
    if (stored_crc != actual_crc) {
        throw ParseError("'" + path + "': checksum mismatch (file corrupt)");
    }

    Cursor c{reinterpret_cast<const uint8_t*>(content.data()), payload_size, 0, "'" + path + "'"};
    c.pos = sizeof(kWeightsMagic);
    const uint16_t version = c.u16();
    if (version != kWeightsVersion) {
        throw ParseError("'" + path + "': unsupported version " + std::to_string(version));
    }
    const uint32_t count = c.u32();

    std::vector<std::pair<std::string, Tensor>> entries;
    entries.reserve(count);
    for (uint32_t i = 0; i < count; ++i) {
        const uint16_t id_len = c.u16();
        std::string id = c.bytes(id_len);
        const uint8_t dtype_code = c.u8();
        if (dtype_code > static_cast<uint8_t>(DType::Bool)) {
            throw ParseError("'" + path + "': entry '" + id + "' has unknown dtype code " +
                             std::to_string(dtype_code));
        }
        const DType dtype = static_cast<DType>(dtype_code);
        const uint8_t rank = c.u8();
        std::vector<int64_t> shape(rank);
        for (auto& e : shape) e = c.u32();
        entries.emplace_back(std::move(id), read_tensor_payload(c, dtype, std::move(shape)));
    }
    if (c.pos != payload_size) {
        throw ParseError("'" + path + "': trailing bytes after last entry");
    }
    return entries;
}

Graph load_model(const std::string& graph_path, const std::string& weights_path) {
    GraphDef def = graph_def_from_json(read_file(graph_path));
    auto entries = load_tensors(weights_path);

    std::map<std::string, Tensor> constants;
    for (auto& [id, t] : entries) {
        if (!constants.emplace(id, std::move(t)).second) {
            throw ParseError("'" + weights_path + "': duplicate weight entry '" + id + "'");
        }
    }

    // Exact correspondence between Const nodes and weight entries.
    std::set<std::string> const_ids;
    for (const Node& n : def.nodes) {
        if (n.kind == OpKind::Const) {
            const_ids.insert(n.id);
            if (!constants.count(n.id)) {
                throw ParseError("missing weight entry for Const node '" + n.id + "'");
            }
        }
    }
    for (const auto& [id, t] : constants) {
        if (!const_ids.count(id)) {
            throw ParseError("extra weight entry '" + id + "' has no Const node");
        }
    }

    return Graph::build(std::move(def), std::move(constants));
}

void save_model(const Graph& g, const std::string& graph_path, const std::string& weights_path) {
    write_file_atomic(graph_path, graph_to_json(g));
    std::vector<std::pair<std::string, Tensor>> entries;
    for (const Node& n : g.nodes()) { // declaration order keeps saves byte-stable
        if (n.kind == OpKind::Const) {
            entries.emplace_back(n.id, g.constant(n.id));
        }
    }
    save_tensors(weights_path, entries);
}

Feeds load_feeds(const std::string& path) {
    Feeds feeds;
    for (auto& [id, t] : load_tensors(path)) {
        if (!feeds.emplace(id, std::move(t)).second) {
            throw ParseError("'" + path + "': duplicate feed entry '" + id + "'");
        }
    }
    return feeds;
}

void save_feeds(const std::string& path, const Feeds& feeds) {
    std::vector<std::pair<std::string, Tensor>> entries(feeds.begin(), feeds.end());
    save_tensors(path, entries);
}

} // namespace graphfi
