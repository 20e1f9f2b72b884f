#include "doctest.h"
#include "quest/report.hpp"

using quest::ConfusionMatrix;

TEST_CASE("format_fixed2") {
    CHECK(quest::format_fixed2(94.1666666) == "94.17");
    CHECK(quest::format_fixed2(0.0) == "0.00");
    CHECK(quest::format_fixed2(100.0) == "100.00");
}

TEST_CASE("confusion_table_text: row-normalized 2-decimal layout") {
    ConfusionMatrix matrix;
    matrix.labels = {"ang", "joy", "sad"};
    matrix.counts = {
        18, 1, 1,   // ang: 0.90 0.05 0.05
        0, 20, 0,   // joy: 0.00 1.00 0.00
        2, 1, 7,    // sad: 0.20 0.10 0.70
    };

    const std::string text = quest::confusion_table_text(matrix, "Confusion matrix of QUEST");
    // header: 4-char row-label column, then each label right-aligned to 4
    // after a 2-space gutter
    const std::string expected =
        "Confusion matrix of QUEST\n"
        "\n"
        "       ang   joy   sad\n"
        " ang  0.90  0.05  0.05\n"
        " joy  0.00  1.00  0.00\n"
        " sad  0.20  0.10  0.70\n";
    CHECK(text == expected);
}

TEST_CASE("confusion_table_text: zero rows render as all zeros") {
    ConfusionMatrix matrix;
    matrix.labels = {"a", "b"};
    matrix.counts = {0, 0, 1, 3};
    const std::string text = quest::confusion_table_text(matrix, "t");
    CHECK(text.find("   a  0.00  0.00\n") != std::string::npos);
    CHECK(text.find("   b  0.25  0.75\n") != std::string::npos);
}

TEST_CASE("confusion_table_csv lists raw counts") {
    ConfusionMatrix matrix;
    matrix.labels = {"x", "y"};
    matrix.counts = {3, 1, 0, 4};
    CHECK(quest::confusion_table_csv(matrix) ==
          "true_class,x,y\n"
          "x,3,1\n"
          "y,0,4\n");
}
