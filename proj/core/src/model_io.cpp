#include "wallbench/model_io.hpp"

#include "wallbench/error.hpp"

#include <json.hpp>

#include <cstdint>
#include <cstring>
#include <fstream>

namespace wallbench {

namespace {

constexpr char kMagic[8] = {'W', 'B', 'M', 'F', '0', '0', '0', '1'};

void write_u32(std::ofstream& out, std::uint32_t v) {
    char buf[4];
    for (int i = 0; i < 4; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
    out.write(buf, 4);
}

std::uint32_t read_u32(std::ifstream& in) {
    char buf[4];
    in.read(buf, 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
        v |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf[i])) << (8 * i);
    }
    return v;
}

} // namespace

void save_model(const ModelFile& m, const std::filesystem::path& path) {
    if (m.kind.empty()) throw ValidationError("save_model: empty model kind");
    for (const auto& [name, t] : m.tensors) {
        if (name.empty()) throw ValidationError("save_model: unnamed tensor");
        if (!t.allFinite()) throw ValidationError("save_model: non-finite tensor " + name);
    }

    nlohmann::ordered_json header;
    header["kind"] = m.kind;
    header["meta"] = nlohmann::ordered_json::array();
    for (const auto& [key, value] : m.meta) header["meta"].push_back({key, value});
    header["tensors"] = nlohmann::ordered_json::array();
    for (const auto& [name, t] : m.tensors) {
        header["tensors"].push_back(
            {{"name", name}, {"rows", t.rows()}, {"cols", t.cols()}});
    }
    const std::string header_text = header.dump();

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("save_model: cannot open " + path.string());
    out.write(kMagic, sizeof(kMagic));
    write_u32(out, static_cast<std::uint32_t>(header_text.size()));
    out.write(header_text.data(), static_cast<std::streamsize>(header_text.size()));

    for (const auto& [name, t] : m.tensors) {
        for (Eigen::Index r = 0; r < t.rows(); ++r) {
            for (Eigen::Index c = 0; c < t.cols(); ++c) {
                const double v = t(r, c);
                char buf[8];
                std::memcpy(buf, &v, 8);
                out.write(buf, 8);
            }
        }
    }
    out.flush();
    if (!out) throw IoError("save_model: write failed for " + path.string());
}

ModelFile load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("load_model: cannot open " + path.string());

    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw ValidationError("load_model: bad magic in " + path.string());
    }

    const std::uint32_t header_len = read_u32(in);
    std::string header_text(header_len, '\0');
    in.read(header_text.data(), static_cast<std::streamsize>(header_len));
    if (!in) throw ValidationError("load_model: truncated header in " + path.string());

    ModelFile m;
    try {
        const nlohmann::json header = nlohmann::json::parse(header_text);
        m.kind = header.at("kind").get<std::string>();
        for (const auto& entry : header.at("meta")) {
            m.meta.emplace_back(entry.at(0).get<std::string>(), entry.at(1).get<std::string>());
        }
        for (const auto& entry : header.at("tensors")) {
            const auto rows = entry.at("rows").get<Eigen::Index>();
            const auto cols = entry.at("cols").get<Eigen::Index>();
            if (rows < 0 || cols < 0) throw ValidationError("load_model: negative tensor shape");
            m.tensors.emplace_back(entry.at("name").get<std::string>(),
                                   Eigen::MatrixXd(rows, cols));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("load_model: malformed header: ") + e.what());
    }

    for (auto& [name, t] : m.tensors) {
        for (Eigen::Index r = 0; r < t.rows(); ++r) {
            for (Eigen::Index c = 0; c < t.cols(); ++c) {
                char buf[8];
                in.read(buf, 8);
                double v = 0.0;
                std::memcpy(&v, buf, 8);
                t(r, c) = v;
            }
        }
    }
    if (!in) throw ValidationError("load_model: truncated tensor data in " + path.string());
    in.peek();
    if (!in.eof()) throw ValidationError("load_model: trailing bytes in " + path.string());

    for (const auto& [name, t] : m.tensors) {
        if (!t.allFinite()) throw ValidationError("load_model: non-finite tensor " + name);
    }
    return m;
}

const std::string& meta_value(const ModelFile& m, const std::string& key) {
    for (const auto& [k, v] : m.meta) {
        if (k == key) return v;
    }
    throw ValidationError("model meta key missing: " + key);
}

const Eigen::MatrixXd& tensor_value(const ModelFile& m, const std::string& name) {
    for (const auto& [k, t] : m.tensors) {
        if (k == name) return t;
    }
    throw ValidationError("model tensor missing: " + name);
}

} // namespace wallbench
