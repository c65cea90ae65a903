#include <sstream>

#include "helpers.hpp"
#include "npde/io.hpp"

using namespace npde;
using npde::test::field1d;

TEST(FormatDouble, SeventeenSignificantDigits) {
    EXPECT_EQ(format_double(0.1), "0.10000000000000001");
    EXPECT_EQ(format_double(1.0), "1");
    EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Csv, FieldRoundTrip1D) {
    std::mt19937_64 rng(31);
    const FieldState f = field1d(npde::test::random_values(rng, 13));
    std::stringstream ss;
    write_csv(ss, f);
    EXPECT_EQ(read_field_csv(ss), f);
}

TEST(Csv, FieldRoundTrip2D) {
    std::mt19937_64 rng(32);
    const FieldState f(2, 4, npde::test::random_values(rng, 16));
    std::stringstream ss;
    write_csv(ss, f);
    const std::string text = ss.str();
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);
    EXPECT_EQ(read_field_csv(ss), f);
}

TEST(Csv, StencilRows) {
    std::stringstream ss;
    write_csv(ss, laplacian_1d(1.0));
    EXPECT_EQ(ss.str(), "1,-2,1\n");
}

TEST(Csv, RowsSkipBlankLines) {
    std::stringstream ss("1,2\n\n3,4,5\n");
    const auto rows = read_csv_rows(ss);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[1], (std::vector<double>{3, 4, 5}));
}

TEST(Csv, RejectsGarbage) {
    std::stringstream ss("1,abc\n");
    EXPECT_ANY_THROW(read_csv_rows(ss));
}

TEST(Pgm, HeaderAndNormalization) {
    const FieldState f(2, 2, {0.0, 1.0, 2.0, 4.0});
    std::stringstream ss;
    write_pgm(ss, f);
    const std::string s = ss.str();
    const std::string header = "P5\n2 2\n255\n";
    ASSERT_EQ(s.substr(0, header.size()), header);
    ASSERT_EQ(s.size(), header.size() + 4);
    EXPECT_EQ(static_cast<unsigned char>(s[header.size()]), 0);
    EXPECT_EQ(static_cast<unsigned char>(s[header.size() + 3]), 255);
}

TEST(Pgm, ConstantFieldIsBlack) {
    std::stringstream ss;
    write_pgm(ss, FieldState(2, 3, std::vector<double>(9, 5.0)));
    const std::string s = ss.str();
    for (std::size_t i = s.size() - 9; i < s.size(); ++i) EXPECT_EQ(s[i], '\0');
}

TEST(Trajectory, OneRowPerSlice) {
    Trajectory t;
    t.grid = make_grid(3, 1.0, 0.1, BoundaryCondition::periodic());
    t.slices = {field1d({1, 2, 3}), field1d({4, 5, 6})};
    std::stringstream ss;
    write_trajectory_csv(ss, t);
    EXPECT_EQ(ss.str(), "0,1,2,3\n1,4,5,6\n");
}
