#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "pvtwin/csv.hpp"
#include "pvtwin/sha256.hpp"
#include "support/fixtures.hpp"

using namespace pvtwin;

TEST_SUITE("csv") {

TEST_CASE("parses plain rows with line numbers") {
    CsvTable t;
    CsvError err;
    REQUIRE(parse_csv("a,b,c\n1,2,3\n4,5,6\n", t, err));
    REQUIRE(t.header.size() == 3);
    CHECK(t.column("b") == 1);
    CHECK(t.column("absent") == -1);
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[1][2] == "6");
    CHECK(t.row_lines[0] == 2);
    CHECK(t.row_lines[1] == 3);
}

TEST_CASE("quoted fields with embedded commas and quotes") {
    CsvTable t;
    CsvError err;
    REQUIRE(parse_csv("name,note\nx,\"a,b\"\ny,\"say \"\"hi\"\"\"\n", t, err));
    CHECK(t.rows[0][1] == "a,b");
    CHECK(t.rows[1][1] == "say \"hi\"");
}

TEST_CASE("missing file reports an error") {
    CsvTable t;
    CsvError err;
    CHECK_FALSE(read_csv_file("/nonexistent/nowhere.csv", t, err));
    CHECK_FALSE(err.message.empty());
}

TEST_CASE("writer round-trips doubles exactly") {
    CsvWriter w({"x", "label"});
    const double values[] = {0.1, 1.0 / 3.0, 1e-17, 123456789.123456, -0.0, 42.0};
    for (const double v : values) {
        w.add_row();
        w.add(v);
        w.add("row");
    }
    CsvTable t;
    CsvError err;
    REQUIRE(parse_csv(w.str(), t, err));
    REQUIRE(t.rows.size() == 6);
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(std::stod(t.rows[i][0]) == values[i]);
    }
}

TEST_CASE("writer output is deterministic") {
    auto build = [] {
        CsvWriter w({"a", "b"});
        w.add_row();
        w.add(3.14159);
        w.add(7);
        return w.str();
    };
    CHECK(build() == build());
    CHECK(CsvWriter::format_double(0.5) == "0.5");
    CHECK(CsvWriter::format_double(1.0) == "1");
}

TEST_CASE("writer file output") {
    const std::string dir = testfix::scratch_dir("csv_writer");
    CsvWriter w({"h"});
    w.add_row();
    w.add(1.25);
    REQUIRE(w.write_file(dir + "/out.csv"));
    std::ifstream in(dir + "/out.csv", std::ios::binary);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(text == "h\n1.25\n");
}

}  // TEST_SUITE

TEST_SUITE("sha256") {

TEST_CASE("FIPS 180-4 reference vectors") {
    CHECK(sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
          "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}

TEST_CASE("million 'a' vector, streamed in odd chunks") {
    Sha256 h;
    const std::string chunk(997, 'a');  // prime-sized chunks cross block boundaries
    std::size_t fed = 0;
    while (fed + chunk.size() <= 1000000) {
        h.update(chunk.data(), chunk.size());
        fed += chunk.size();
    }
    const std::string rest(1000000 - fed, 'a');
    h.update(rest.data(), rest.size());
    CHECK(h.hex_digest() ==
          "cdc76e5c9914fb9281a1c7e284d73e67f1809a48a497200e046d39ccc7112cd0");
}

TEST_CASE("file digest matches in-memory digest") {
    const std::string dir = testfix::scratch_dir("sha_file");
    const std::string path = dir + "/blob.bin";
    std::string payload;
    for (int i = 0; i < 300; ++i) payload += static_cast<char>(i % 251);
    {
        std::ofstream out(path, std::ios::binary);
        out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    }
    bool ok = false;
    CHECK(sha256_file_hex(path, ok) == sha256_hex(payload));
    CHECK(ok);
    ok = true;
    CHECK(sha256_file_hex(dir + "/missing.bin", ok).empty());
    CHECK_FALSE(ok);
}

}  // TEST_SUITE
