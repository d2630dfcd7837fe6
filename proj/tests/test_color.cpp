#include <doctest.h>

#include "color_cases.hpp"
#include "ocsis/color.hpp"
#include "ocsis/error.hpp"

using namespace ocsis;
using namespace testing;
using namespace testing::colors;

TEST_CASE("color: full enumeration matches the transcribed table") {
  auto c = compare_all();
  for (const auto& d : c.deviations) CHECK_MESSAGE(false, d);
  CHECK(c.compared == item_colors().size() + title_colors().size() + message_colors().size());
}

TEST_CASE("color: abnormal and emergency titles") {
  CHECK(title_color(ProcedureKind::Abnormal) == ColorCode::Amber);
  CHECK(title_color(ProcedureKind::Emergency) == ColorCode::Red);
}

TEST_CASE("color: names round-trip") {
  for (int i = 0; i < 7; ++i) {
    auto c = static_cast<ColorCode>(i);
    CHECK(parse_color(to_string(c)) == c);
  }
  CHECK_FALSE(parse_color("BLUE"));
  for (auto s : kStatuses) CHECK(parse_status(to_string(s)) == s);
  CHECK_FALSE(parse_status("Done"));
}

TEST_CASE("color: info levels") {
  Action a;
  a.id = "APU_BLEED";
  a.level1 = "APU BLEED ON";
  CHECK(info_text(a, 1) == std::optional<std::string>("APU BLEED ON"));
  CHECK_FALSE(info_text(a, 2));
  CHECK_FALSE(info_text(a, 3));
  for (int bad : {0, 4, -1}) {
    try {
      info_text(a, bad);
      FAIL("expected InvalidLevel");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidLevel);
    }
  }
}
