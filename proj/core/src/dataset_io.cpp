#include "wallbench/dataset_io.hpp"

#include "wallbench/error.hpp"
#include "wallbench/text.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace fs = std::filesystem;

namespace wallbench {
namespace {

constexpr const char* kConditionsHeader = "id,mach,aoa_deg,p_i,split";
constexpr const char* kGeometryHeader = "point_id,x,y,z,nx,ny,nz";
constexpr const char* kFieldHeader = "point_id,cp,cfx,cfy,cfz";

void write_text_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

std::vector<std::string> read_lines(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    std::vector<std::string> lines;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == '\n') {
            std::string line = text.substr(start, i - start);
            if (!line.empty() && line.back() == '\r') line.pop_back();
            lines.push_back(std::move(line));
            start = i + 1;
        }
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    return lines;
}

void create_dir_here(const fs::path& dir) {
    std::error_code ec;
    if (fs::is_directory(dir, ec)) return;
    if (!fs::create_directory(dir, ec) || ec) {
        throw IoError("cannot create directory '" + dir.string() + "'" +
                      (ec ? ": " + ec.message() : ""));
    }
}

template <typename ErrorT>
void check_header(const std::vector<std::string>& lines, const char* expected,
                  const fs::path& path) {
    if (lines.empty() || lines.front() != expected) {
        throw ErrorT("'" + path.string() + "': expected header '" + expected + "'");
    }
}

std::string render_field_csv(const WallField& f) {
    std::string out(kFieldHeader);
    out += '\n';
    for (Eigen::Index i = 0; i < f.values.rows(); ++i) {
        out += std::to_string(i);
        for (Eigen::Index j = 0; j < 4; ++j) {
            out += ',';
            out += format_full(f.values(i, j));
        }
        out += '\n';
    }
    return out;
}

template <typename ErrorT>
WallField parse_field_csv(const fs::path& path, const std::string& id, Eigen::Index n_p) {
    const auto lines = read_lines(path);
    check_header<ErrorT>(lines, kFieldHeader, path);
    const auto n_rows = static_cast<Eigen::Index>(lines.size()) - 1;
    if (n_p >= 0 && n_rows != n_p) {
        throw ErrorT("'" + path.string() + "': expected " + std::to_string(n_p) +
                     " rows, found " + std::to_string(n_rows));
    }
    WallField f;
    f.condition_id = id;
    f.values.resize(n_rows, 4);
    for (Eigen::Index i = 0; i < n_rows; ++i) {
        const auto cols = split(lines[static_cast<std::size_t>(i) + 1], ',');
        if (cols.size() != 5) {
            throw ErrorT("'" + path.string() + "' line " + std::to_string(i + 2) +
                         ": expected 5 columns");
        }
        try {
            if (parse_int(cols[0]) != i) {
                throw ValidationError("point ids must be 0..n_p-1 in order");
            }
            for (Eigen::Index j = 0; j < 4; ++j) {
                f.values(i, j) = parse_double(cols[static_cast<std::size_t>(j) + 1]);
            }
        } catch (const Error& e) {
            throw ErrorT("'" + path.string() + "' line " + std::to_string(i + 2) + ": " +
                         e.what());
        }
        if (!f.values.row(i).allFinite()) {
            throw ErrorT("'" + path.string() + "' line " + std::to_string(i + 2) +
                         ": non-finite value");
        }
    }
    return f;
}

} // namespace

void save_dataset(const Dataset& ds, const fs::path& dir) {
    ds.validate();
    create_dir_here(dir);
    create_dir_here(dir / "fields");

    std::string geom(kGeometryHeader);
    geom += '\n';
    for (Eigen::Index i = 0; i < ds.geometry.n_p(); ++i) {
        geom += std::to_string(i);
        for (Eigen::Index j = 0; j < 3; ++j) {
            geom += ',';
            geom += format_full(ds.geometry.coords(i, j));
        }
        for (Eigen::Index j = 0; j < 3; ++j) {
            geom += ',';
            geom += format_full(ds.geometry.normals(i, j));
        }
        geom += '\n';
    }
    write_text_file(dir / "geometry.csv", geom);

    std::string conds(kConditionsHeader);
    conds += '\n';
    for (const auto& c : ds.conditions) {
        conds += c.id;
        conds += ',';
        conds += format_full(c.mach);
        conds += ',';
        conds += format_full(c.aoa_deg);
        conds += ',';
        conds += format_full(c.p_i);
        conds += ',';
        conds += to_string(ds.split.at(c.id));
        conds += '\n';
    }
    write_text_file(dir / "conditions.csv", conds);

    for (const auto& [id, f] : ds.fields) {
        write_text_file(dir / "fields" / (id + ".csv"), render_field_csv(f));
    }
}

Dataset load_dataset(const fs::path& dir) {
    if (!fs::is_directory(dir)) {
        throw IoError("dataset directory '" + dir.string() + "' does not exist");
    }
    Dataset ds;

    const fs::path geom_path = dir / "geometry.csv";
    const auto geom_lines = read_lines(geom_path);
    check_header<ValidationError>(geom_lines, kGeometryHeader, geom_path);
    const auto n_p = static_cast<Eigen::Index>(geom_lines.size()) - 1;
    if (n_p <= 0) throw ValidationError("'" + geom_path.string() + "': no points");
    ds.geometry.coords.resize(n_p, 3);
    ds.geometry.normals.resize(n_p, 3);
    for (Eigen::Index i = 0; i < n_p; ++i) {
        const auto cols = split(geom_lines[static_cast<std::size_t>(i) + 1], ',');
        if (cols.size() != 7) {
            throw ValidationError("'" + geom_path.string() + "' line " + std::to_string(i + 2) +
                                  ": expected 7 columns");
        }
        try {
            if (parse_int(cols[0]) != i) {
                throw ValidationError("point ids must be 0..n_p-1 in order");
            }
            for (Eigen::Index j = 0; j < 3; ++j) {
                ds.geometry.coords(i, j) = parse_double(cols[static_cast<std::size_t>(j) + 1]);
                ds.geometry.normals(i, j) = parse_double(cols[static_cast<std::size_t>(j) + 4]);
            }
        } catch (const Error& e) {
            throw ValidationError("'" + geom_path.string() + "' line " + std::to_string(i + 2) +
                                  ": " + e.what());
        }
    }

    const fs::path cond_path = dir / "conditions.csv";
    const auto cond_lines = read_lines(cond_path);
    check_header<ValidationError>(cond_lines, kConditionsHeader, cond_path);
    for (std::size_t i = 1; i < cond_lines.size(); ++i) {
        const auto cols = split(cond_lines[i], ',');
        if (cols.size() != 5) {
            throw ValidationError("'" + cond_path.string() + "' line " + std::to_string(i + 1) +
                                  ": expected 5 columns");
        }
        FlowCondition c;
        c.id = cols[0];
        try {
            c.mach = parse_double(cols[1]);
            c.aoa_deg = parse_double(cols[2]);
            c.p_i = parse_double(cols[3]);
            ds.split[c.id] = split_label_from_string(cols[4]);
        } catch (const Error& e) {
            throw ValidationError("'" + cond_path.string() + "' line " + std::to_string(i + 1) +
                                  ": " + e.what());
        }
        ds.conditions.push_back(std::move(c));
    }

    for (const auto& c : ds.conditions) {
        const fs::path field_path = dir / "fields" / (c.id + ".csv");
        if (fs::exists(field_path)) {
            ds.fields[c.id] = parse_field_csv<ValidationError>(field_path, c.id, n_p);
        }
    }

    ds.validate();
    return ds;
}

void save_submission(const std::map<std::string, WallField>& predictions, const fs::path& dir) {
    create_dir_here(dir);
    create_dir_here(dir / "fields");
    for (const auto& [id, f] : predictions) {
        if (!f.values.allFinite()) {
            throw SubmissionError("prediction for '" + id + "' contains non-finite values");
        }
        write_text_file(dir / "fields" / (id + ".csv"), render_field_csv(f));
    }
}

std::map<std::string, WallField> load_submission(const fs::path& dir,
                                                 const std::vector<std::string>& test_ids,
                                                 Eigen::Index n_p) {
    const fs::path fields_dir = dir / "fields";
    if (!fs::is_directory(fields_dir)) {
        throw SubmissionError("submission directory '" + dir.string() + "' has no fields/ subdirectory");
    }
    std::set<std::string> expected(test_ids.begin(), test_ids.end());
    std::set<std::string> found;
    for (const auto& entry : fs::directory_iterator(fields_dir)) {
        const fs::path p = entry.path();
        if (!entry.is_regular_file() || p.extension() != ".csv") {
            throw SubmissionError("unexpected entry '" + p.string() + "' in submission");
        }
        found.insert(p.stem().string());
    }
    std::vector<std::string> missing;
    std::set_difference(expected.begin(), expected.end(), found.begin(), found.end(),
                        std::back_inserter(missing));
    if (!missing.empty()) {
        std::string msg = "submission is missing test condition(s):";
        for (const auto& id : missing) msg += " " + id;
        throw SubmissionError(msg);
    }
    std::vector<std::string> extra;
    std::set_difference(found.begin(), found.end(), expected.begin(), expected.end(),
                        std::back_inserter(extra));
    if (!extra.empty()) {
        std::string msg = "submission contains file(s) for non-test condition(s):";
        for (const auto& id : extra) msg += " " + id;
        throw SubmissionError(msg);
    }

    std::map<std::string, WallField> out;
    for (const auto& id : test_ids) {
        out[id] = parse_field_csv<SubmissionError>(fields_dir / (id + ".csv"), id, n_p);
    }
    return out;
}

} // namespace wallbench
