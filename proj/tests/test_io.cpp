#include <doctest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "tenrank/io.hpp"

using namespace tenrank;

TEST_CASE("TFMS round trip is bitwise exact") {
    std::mt19937 gen(211);
    TensorSeries s = oracle::random_series({3, 4, 2}, 5, gen);
    std::stringstream buf;
    write_tfms(buf, s);
    TensorSeries back = read_tfms(buf);
    REQUIRE(back.length() == s.length());
    REQUIRE(back.dims() == s.dims());
    for (std::int64_t t = 0; t < s.length(); ++t) CHECK(back.obs(t) == s.obs(t));
}

TEST_CASE("TFMS rejects bad headers") {
    std::stringstream buf;
    buf << "NOPE";
    CHECK_THROWS_AS(read_tfms(buf), input_error);

    std::mt19937 gen(213);
    TensorSeries s = oracle::random_series({2, 2}, 3, gen);
    std::stringstream good;
    write_tfms(good, s);
    std::string bytes = good.str();
    bytes[4] = 9;  // version
    std::stringstream bad(bytes);
    CHECK_THROWS_AS(read_tfms(bad), input_error);

    std::stringstream truncated(good.str().substr(0, 40));
    CHECK_THROWS_AS(read_tfms(truncated), input_error);
}

TEST_CASE("long-form CSV ingest") {
    // 2x2, T = 3 fixture: value = 100 t + 10 i + j (1-based labels).
    std::string text = "t,i1,i2,value\n";
    for (int t = 1; t <= 3; ++t)
        for (int i = 1; i <= 2; ++i)
            for (int j = 1; j <= 2; ++j)
                text += std::to_string(t) + "," + std::to_string(i) + "," + std::to_string(j) + "," +
                        std::to_string(100 * t + 10 * i + j) + "\n";
    std::stringstream in(text);
    TensorSeries s = ingest_csv_stream(in);
    REQUIRE(s.length() == 3);
    REQUIRE(s.dims() == std::vector<std::int64_t>{2, 2});
    for (std::int64_t t = 0; t < 3; ++t)
        for (std::int64_t i = 0; i < 2; ++i)
            for (std::int64_t j = 0; j < 2; ++j) {
                std::vector<std::int64_t> idx{i, j};
                CHECK(s.obs(t).at(idx) == 100.0 * (t + 1) + 10.0 * (i + 1) + (j + 1));
            }
}

TEST_CASE("wide-form CSV matches the long form") {
    std::string long_text = "t,i1,i2,value\n";
    std::string wide_text = "# dims: 2,2\nt,v_1,v_2,v_3,v_4\n";
    for (int t = 1; t <= 3; ++t) {
        wide_text += std::to_string(t);
        // Layout order: first mode fastest -> (i=1,j=1),(2,1),(1,2),(2,2).
        for (int j = 1; j <= 2; ++j)
            for (int i = 1; i <= 2; ++i) {
                const int v = 100 * t + 10 * i + j;
                long_text += std::to_string(t) + "," + std::to_string(i) + "," + std::to_string(j) +
                             "," + std::to_string(v) + "\n";
                wide_text += "," + std::to_string(v);
            }
        wide_text += "\n";
    }
    std::stringstream in_long(long_text), in_wide(wide_text);
    TensorSeries a = ingest_csv_stream(in_long);
    TensorSeries b = ingest_csv_stream(in_wide);
    REQUIRE(a.dims() == b.dims());
    REQUIRE(a.length() == b.length());
    for (std::int64_t t = 0; t < a.length(); ++t) CHECK(a.obs(t) == b.obs(t));
}

TEST_CASE("CSV error contracts") {
    SUBCASE("missing cell names the position") {
        std::string text = "t,i1,i2,value\n1,1,1,1\n1,1,2,2\n1,2,1,3\n2,1,1,5\n2,1,2,6\n2,2,1,7\n2,2,2,8\n";
        std::stringstream in(text);
        try {
            ingest_csv_stream(in);
            FAIL("expected input_error");
        } catch (const input_error& e) {
            CHECK(std::string(e.what()).find("(t=1, 2, 2)") != std::string::npos);
        }
    }
    SUBCASE("duplicate cell is rejected") {
        std::string text = "t,i1,value\n1,1,1\n1,1,2\n2,1,3\n";
        std::stringstream in(text);
        CHECK_THROWS_AS(ingest_csv_stream(in), input_error);
    }
    SUBCASE("ragged row is rejected") {
        std::string text = "t,i1,value\n1,1,1\n2,1\n";
        std::stringstream in(text);
        CHECK_THROWS_AS(ingest_csv_stream(in), input_error);
    }
}

TEST_CASE("long-form CSV writer round trips") {
    std::mt19937 gen(217);
    TensorSeries s = oracle::random_series({2, 3}, 4, gen);
    std::stringstream buf;
    write_csv(buf, s);
    TensorSeries back = ingest_csv_stream(buf);
    REQUIRE(back.dims() == s.dims());
    for (std::int64_t t = 0; t < s.length(); ++t)
        for (std::int64_t i = 0; i < s.obs(t).size(); ++i)
            CHECK(back.obs(t)[i] == doctest::Approx(s.obs(t)[i]).epsilon(1e-5));
}
