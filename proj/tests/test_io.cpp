#include <gtest/gtest.h>

#include <complex>
#include <sstream>

#include "kashaev/io.hpp"
#include "kashaev/state_sum.hpp"

using kashaev::cplx;

namespace {

std::string data_path(const std::string& name) { return std::string(KASHAEV_DATA_DIR) + "/" + name; }

bool same_events(const kashaev::TangleDiagram& a, const kashaev::TangleDiagram& b) {
  if (a.events().size() != b.events().size()) return false;
  for (std::size_t i = 0; i < a.events().size(); ++i) {
    if (a.events()[i].kind != b.events()[i].kind || a.events()[i].at != b.events()[i].at) return false;
  }
  return true;
}

}  // namespace

TEST(DiagramJson, RoundTrip) {
  for (const auto& d : {kashaev::figure_eight_diagram(), kashaev::trefoil_diagram(), kashaev::kink_diagram()}) {
    const auto back = kashaev::diagram_from_json(kashaev::to_json(d));
    EXPECT_EQ(back.name(), d.name());
    EXPECT_TRUE(same_events(back, d));
  }
}

TEST(DiagramJson, FixturesMatchBuiltins) {
  EXPECT_TRUE(same_events(kashaev::diagram_from_json(kashaev::read_json_file(data_path("figure_eight.json"))),
                          kashaev::figure_eight_diagram()));
  EXPECT_TRUE(same_events(kashaev::diagram_from_json(kashaev::read_json_file(data_path("trefoil.json"))),
                          kashaev::trefoil_diagram()));
}

TEST(DiagramJson, FixtureGivesSameInvariant) {
  const auto d = kashaev::diagram_from_json(kashaev::read_json_file(data_path("figure_eight.json")));
  const kashaev::QContext ctx(4);
  EXPECT_NEAR(std::abs(kashaev::state_sum(ctx, d)), 27.0, 1e-10);
}

TEST(DiagramJson, RejectsInvalid) {
  EXPECT_THROW(kashaev::diagram_from_json(kashaev::read_json_file(data_path("bad_width.json"))),
               kashaev::DiagramError);
  EXPECT_THROW(kashaev::diagram_from_json(nlohmann::json::parse(R"({"events": [{"op": "zz", "at": 0}]})")),
               kashaev::DiagramError);
  EXPECT_THROW(kashaev::diagram_from_json(nlohmann::json::parse(R"({"events": [{"op": "xp"}]})")),
               kashaev::DiagramError);
  EXPECT_THROW(kashaev::diagram_from_json(nlohmann::json::parse("[]")), kashaev::DiagramError);
  EXPECT_THROW(kashaev::read_json_file(data_path("no_such_file.json")), std::invalid_argument);
}

TEST(InvariantRecord, JsonRoundTripIsExact) {
  const kashaev::QContext ctx(7);
  const auto rec = kashaev::make_record(7, kashaev::state_sum(ctx, kashaev::figure_eight_diagram()));
  const auto back = kashaev::record_from_json(nlohmann::json::parse(kashaev::to_json(rec).dump()));
  EXPECT_EQ(back, rec);
}

TEST(InvariantRecord, Csv) {
  const auto rec = kashaev::make_record(2, cplx(5.0, 0.0));
  EXPECT_EQ(kashaev::csv_header_invariant(), "N,re,im,modulus,log_modulus");
  const std::string line = kashaev::to_csv(rec);
  std::stringstream ss(line);
  std::string field;
  std::vector<std::string> fields;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  ASSERT_EQ(fields.size(), 5u);
  EXPECT_EQ(fields[0], "2");
  EXPECT_EQ(std::stod(fields[1]), 5.0);
  EXPECT_EQ(std::stod(fields[4]), std::log(5.0));
}

TEST(FormatDouble, RoundTrips) {
  for (double x : {0.1, 1.0 / 3.0, 2.029883212819307, -1e-300, 6.02e23}) {
    EXPECT_EQ(std::stod(kashaev::format_double(x)), x);
  }
}

TEST(FitJson, CarriesRange) {
  kashaev::GrowthFit f;
  f.n_min = 100;
  f.n_max = 1000;
  const auto j = kashaev::to_json(f);
  EXPECT_EQ(j.at("N_range")[0], 100);
  EXPECT_EQ(j.at("N_range")[1], 1000);
}
