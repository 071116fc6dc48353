#include "diffred/io.hpp"

#include <bit>
#include <cerrno>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include <nlohmann/json.hpp>

namespace diffred {

namespace {

constexpr char kMagic[4] = {'D', 'R', 'E', 'D'};
constexpr std::uint8_t kBinVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "BIN reader assumes a little-endian host");

DataMatrix load_csv(const std::filesystem::path& path, bool skip_header) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::vector<std::vector<double>> rows;
    std::string line;
    long lineno = 0;
    long data_row = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (skip_header && lineno == 1) {
            continue;
        }
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        ++data_row;
        std::vector<double> row;
        const char* p = line.data();
        const char* end = p + line.size();
        long col = 0;
        while (p <= end) {
            const char* comma = static_cast<const char*>(std::memchr(p, ',', static_cast<std::size_t>(end - p)));
            const char* field_end = comma ? comma : end;
            ++col;
            double v;
            auto [ptr, ec] = std::from_chars(p, field_end, v);
            // skip surrounding spaces
            if (ec != std::errc{} || ptr != field_end) {
                std::string field(p, field_end);
                std::size_t a = field.find_first_not_of(" \t");
                std::size_t b = field.find_last_not_of(" \t");
                bool ok = false;
                if (a != std::string::npos) {
                    auto [ptr2, ec2] = std::from_chars(field.data() + a, field.data() + b + 1, v);
                    ok = (ec2 == std::errc{} && ptr2 == field.data() + b + 1);
                }
                if (!ok) {
                    throw ParseError("cannot parse '" + field + "'", data_row, col);
                }
            }
            if (!std::isfinite(v)) {
                throw ParseError("non-finite value", data_row, col);
            }
            row.push_back(v);
            if (!comma) {
                break;
            }
            p = comma + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw ParseError("expected " + std::to_string(rows.front().size()) +
                                 " columns, got " + std::to_string(row.size()),
                             data_row, static_cast<long>(row.size()));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw ParseError("no data rows in " + path.string());
    }
    Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
    }
    return DataMatrix(std::move(m));
}

DataMatrix load_bin(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    char magic[4];
    std::uint8_t version = 0;
    std::uint64_t n = 0, D = 0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&version), 1);
    in.read(reinterpret_cast<char*>(&n), 8);
    in.read(reinterpret_cast<char*>(&D), 8);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) {
        throw ParseError("bad magic in " + path.string());
    }
    if (version != kBinVersion) {
        throw ParseError("unsupported BIN version " + std::to_string(version));
    }
    if (n == 0 || D == 0) {
        throw ParseError("empty matrix in " + path.string());
    }
    Matrix m(static_cast<Index>(n), static_cast<Index>(D));
    std::vector<double> row(D);
    for (std::uint64_t i = 0; i < n; ++i) {
        in.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(D * sizeof(double)));
        if (!in) {
            throw ParseError("truncated payload: expected " + std::to_string(n) + "x" +
                             std::to_string(D) + " doubles in " + path.string());
        }
        for (std::uint64_t j = 0; j < D; ++j) {
            m(static_cast<Index>(i), static_cast<Index>(j)) = row[j];
        }
    }
    check_finite(m, path.string().c_str());
    return DataMatrix(std::move(m));
}

} // namespace

FileFormat parse_format(const std::string& name) {
    if (name == "csv" || name == "CSV") {
        return FileFormat::Csv;
    }
    if (name == "bin" || name == "BIN") {
        return FileFormat::Bin;
    }
    throw ConfigError("unknown format '" + name + "' (expected csv or bin)");
}

FileFormat guess_format(const std::filesystem::path& path) {
    return path.extension() == ".csv" ? FileFormat::Csv : FileFormat::Bin;
}

DataMatrix load_matrix(const std::filesystem::path& path, FileFormat format, bool skip_header) {
    if (!std::filesystem::exists(path)) {
        throw IoError("no such file: " + path.string());
    }
    DataMatrix m = (format == FileFormat::Csv) ? load_csv(path, skip_header) : load_bin(path);
    check_finite(m.values, path.string().c_str());
    return m;
}

void save_matrix(const std::filesystem::path& path, FileFormat format, const Matrix& m) {
    if (format == FileFormat::Csv) {
        std::ofstream out(path);
        if (!out) {
            throw IoError("cannot write " + path.string());
        }
        out.precision(17);
        for (Index i = 0; i < m.rows(); ++i) {
            for (Index j = 0; j < m.cols(); ++j) {
                if (j) {
                    out << ',';
                }
                out << m(i, j);
            }
            out << '\n';
        }
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    std::uint8_t version = kBinVersion;
    auto n = static_cast<std::uint64_t>(m.rows());
    auto D = static_cast<std::uint64_t>(m.cols());
    out.write(kMagic, 4);
    out.write(reinterpret_cast<const char*>(&version), 1);
    out.write(reinterpret_cast<const char*>(&n), 8);
    out.write(reinterpret_cast<const char*>(&D), 8);
    std::vector<double> row(D);
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            row[static_cast<std::size_t>(j)] = m(i, j);
        }
        out.write(reinterpret_cast<const char*>(row.data()),
                  static_cast<std::streamsize>(D * sizeof(double)));
    }
    if (!out) {
        throw IoError("write failed: " + path.string());
    }
}

std::filesystem::path sidecar_path(const std::filesystem::path& data_path) {
    std::filesystem::path p = data_path;
    p += ".meta.json";
    return p;
}

void write_preprocess_sidecar(const std::filesystem::path& data_path, const Preprocessing& flags) {
    nlohmann::json j;
    j["row_normalized"] = flags.row_normalized;
    j["column_centered"] = flags.column_centered;
    std::ofstream out(sidecar_path(data_path));
    if (!out) {
        throw IoError("cannot write " + sidecar_path(data_path).string());
    }
    out << j.dump(2) << '\n';
}

Preprocessing read_preprocess_sidecar(const std::filesystem::path& data_path) {
    Preprocessing flags;
    auto p = sidecar_path(data_path);
    if (!std::filesystem::exists(p)) {
        return flags;
    }
    std::ifstream in(p);
    nlohmann::json j = nlohmann::json::parse(in, nullptr, true, true);
    flags.row_normalized = j.value("row_normalized", false);
    flags.column_centered = j.value("column_centered", false);
    return flags;
}

} // namespace diffred
