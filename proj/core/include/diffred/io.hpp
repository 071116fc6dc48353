#ifndef DIFFRED_IO_HPP
#define DIFFRED_IO_HPP

#include <filesystem>
#include <string>

#include "diffred/matrix.hpp"

namespace diffred {

enum class FileFormat { Csv, Bin };

FileFormat parse_format(const std::string& name);

/// Infers the format from the extension (.csv -> CSV, anything else -> BIN).
FileFormat guess_format(const std::filesystem::path& path);

/// Loads a dense matrix. Preprocessing flags on the result are false;
/// callers restore them from a sidecar if one exists.
/// CSV: comma separated, '.' decimal, one point per line, optional single
/// header row skipped when `skip_header`.
/// BIN: magic "DRED", version u8=1, n and D as little-endian u64, then
/// n*D little-endian doubles in row-major order.
DataMatrix load_matrix(const std::filesystem::path& path, FileFormat format,
                       bool skip_header = false);

void save_matrix(const std::filesystem::path& path, FileFormat format, const Matrix& m);

/// Sidecar path for a matrix file: "<file>.meta.json".
std::filesystem::path sidecar_path(const std::filesystem::path& data_path);

void write_preprocess_sidecar(const std::filesystem::path& data_path, const Preprocessing& flags);

/// Restores flags from the sidecar if present; otherwise leaves them false.
Preprocessing read_preprocess_sidecar(const std::filesystem::path& data_path);

} // namespace diffred

#endif
