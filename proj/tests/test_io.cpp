#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "diffred/io.hpp"
#include "diffred/random.hpp"

using namespace diffred;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("diffred_io_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("2x2 identity CSV") {
    TempDir tmp;
    auto p = tmp.path / "id.csv";
    std::ofstream(p) << "1,0\n0,1\n";
    DataMatrix m = load_matrix(p, FileFormat::Csv);
    CHECK(m.rows() == 2);
    CHECK(m.cols() == 2);
    CHECK(m.values(0, 0) == 1.0);
    CHECK(m.values(0, 1) == 0.0);
    CHECK(m.values(1, 1) == 1.0);
    CHECK_FALSE(m.flags.column_centered);
}

TEST_CASE("optional header row is skipped") {
    TempDir tmp;
    auto p = tmp.path / "hdr.csv";
    std::ofstream(p) << "a,b,c\n1,2,3\n4,5,6\n";
    DataMatrix m = load_matrix(p, FileFormat::Csv, true);
    CHECK(m.rows() == 2);
    CHECK(m.values(1, 2) == 6.0);
}

TEST_CASE("CSV parse error cites row and column") {
    TempDir tmp;
    auto p = tmp.path / "bad.csv";
    std::ofstream(p) << "1,2,3\n4,5,abc\n";
    try {
        load_matrix(p, FileFormat::Csv);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.row() == 2);
        CHECK(e.col() == 3);
    }
}

TEST_CASE("ragged CSV rejected") {
    TempDir tmp;
    auto p = tmp.path / "ragged.csv";
    std::ofstream(p) << "1,2,3\n4,5\n";
    CHECK_THROWS_AS(load_matrix(p, FileFormat::Csv), ParseError);
}

TEST_CASE("BIN layout: header then row-major doubles") {
    TempDir tmp;
    auto p = tmp.path / "m.bin";
    Matrix m(3, 4);
    for (Index i = 0; i < 3; ++i) {
        for (Index j = 0; j < 4; ++j) {
            m(i, j) = static_cast<double>(i * 4 + j);
        }
    }
    save_matrix(p, FileFormat::Bin, m);

    std::ifstream in(p, std::ios::binary);
    char magic[4];
    in.read(magic, 4);
    CHECK(std::string(magic, 4) == "DRED");
    std::uint8_t ver;
    in.read(reinterpret_cast<char*>(&ver), 1);
    CHECK(ver == 1);
    std::uint64_t n, D;
    in.read(reinterpret_cast<char*>(&n), 8);
    in.read(reinterpret_cast<char*>(&D), 8);
    CHECK(n == 3);
    CHECK(D == 4);
    double first, second;
    in.read(reinterpret_cast<char*>(&first), 8);
    in.read(reinterpret_cast<char*>(&second), 8);
    CHECK(first == 0.0);
    CHECK(second == 1.0);

    DataMatrix back = load_matrix(p, FileFormat::Bin);
    CHECK(back.values == m);
}

TEST_CASE("truncated BIN payload reports dimension mismatch") {
    TempDir tmp;
    auto p = tmp.path / "short.bin";
    Matrix m = Matrix::Ones(2, 2);
    save_matrix(p, FileFormat::Bin, m);
    fs::resize_file(p, fs::file_size(p) - 8);
    CHECK_THROWS_AS(load_matrix(p, FileFormat::Bin), ParseError);
}

TEST_CASE("missing file") {
    CHECK_THROWS_AS(load_matrix("/nonexistent/nope.bin", FileFormat::Bin), IoError);
}

TEST_CASE("round trip is bit exact for random data") {
    TempDir tmp;
    RandomStream s(77, StreamPurpose::SynthData, 0);
    Matrix m(40, 13);
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            m(i, j) = s.next_gaussian();
        }
    }
    auto p = tmp.path / "rt.bin";
    save_matrix(p, FileFormat::Bin, m);
    CHECK(load_matrix(p, FileFormat::Bin).values == m);
}

TEST_CASE("sidecar round trip") {
    TempDir tmp;
    auto p = tmp.path / "d.bin";
    save_matrix(p, FileFormat::Bin, Matrix::Ones(2, 2));
    write_preprocess_sidecar(p, Preprocessing{true, true});
    Preprocessing f = read_preprocess_sidecar(p);
    CHECK(f.row_normalized);
    CHECK(f.column_centered);
    CHECK_FALSE(read_preprocess_sidecar(tmp.path / "other.bin").column_centered);
}
