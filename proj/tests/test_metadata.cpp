#include <gtest/gtest.h>

#include "adtof/metadata.hpp"
#include "adtof/pitch_map.hpp"
#include "adtof/text.hpp"

using namespace adtof;

TEST(Metadata, DirectFields) {
  auto m = parse_metadata("[song]\nname=X\nartist=Y\ngenre=Rock");
  EXPECT_EQ(m.title, "X");
  EXPECT_EQ(m.artist, "Y");
  EXPECT_EQ(m.genre, "Rock");
  EXPECT_TRUE(m.extra.empty());
}

TEST(Metadata, MissingArtist) {
  try {
    parse_metadata("[song]\nname=X");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingArtist);
  }
  EXPECT_THROW(parse_metadata("[song]\nartist=   \nname=X"), Error);
}

TEST(Metadata, KeysCaseInsensitiveValuesTrimmed) {
  auto m = parse_metadata("[song]\nArtist = Y \nname=X");
  EXPECT_EQ(m.artist, "Y");
  EXPECT_EQ(m.title, "X");
  EXPECT_TRUE(m.genre.empty());
}

TEST(Metadata, ExtraKeysKeepOrderAndCrlf) {
  auto m = parse_metadata("\xEF\xBB\xBF[Song]\r\nartist=A\r\ndelay = 0\r\n; note\r\npro_drums=True\r\n");
  EXPECT_EQ(m.artist, "A");
  ASSERT_EQ(m.extra.size(), 2u);
  EXPECT_EQ(m.extra[0].first, "delay");
  EXPECT_EQ(m.extra[0].second, "0");
  EXPECT_EQ(m.extra[1].first, "pro_drums");
}

TEST(Metadata, InvalidUtf8IsReplaced) {
  auto m = parse_metadata("[song]\nartist=Bj\xF6rk\nname=ok");
  EXPECT_EQ(m.artist, "Bj\xEF\xBF\xBDrk");
}

TEST(PitchMap, ShippedFileMatchesEmbeddedDefaults) {
  auto shipped = parse_pitch_map(text::read_file(std::filesystem::path(ADTOF_SOURCE_DIR) / "config" / "pitch_map.ini"));
  EXPECT_EQ(shipped, default_pitch_map());
}

TEST(PitchMap, ParsesSectionsAndRejectsJunk) {
  auto m = parse_pitch_map("[gameplay]\n60=RedDrum\n[tom_markers]\n61=Blue\n[animation]\n62=FloorTom\n[tracks]\ndrums=KIT\n");
  EXPECT_EQ(m.gameplay.at(60), GameplayLabel::RedDrum);
  EXPECT_EQ(m.tom_markers.at(61), PadColor::Blue);
  EXPECT_EQ(m.animation.at(62), AnimationLabel::FloorTom);
  EXPECT_EQ(m.drum_track, "KIT");
  EXPECT_THROW(parse_pitch_map("[gameplay]\n60=PurpleDrum\n"), Error);
  EXPECT_THROW(parse_pitch_map("[gameplay]\n200=RedDrum\n"), Error);
  EXPECT_THROW(parse_pitch_map("60=RedDrum\n"), Error);
}
