#include <catch2/catch_amalgamated.hpp>
TEST_CASE("placeholder: module under construction") { SUCCEED(); }
