#pragma once

// Small shared source snippets for tests.

#include <string>

namespace rmove::testing {

// Method from the semantic-information illustration: the path between leaves b and a.
inline const std::string kFig1Source = R"J(
class Fig1 {
    int pick(int a, int b) {
        return b > 0 ? a : -1;
    }
}
)J";

// m1 calls m2 and m3; m2 calls m3.
inline const std::string kFig2Source = R"J(
class Fig2 {
    int total;
    void m1() {
        m2();
        this.m3(1);
    }
    void m2() {
        int x = m3(total);
        total = x + 1;
    }
    int m3(int v) {
        return v * 2;
    }
}
)J";

inline const std::string kFig2Facts = R"J({"kind":"class","id":"p::Fig2","project":"p"}
{"kind":"method","id":"p::Fig2::m1()","class":"p::Fig2","name":"m1"}
{"kind":"method","id":"p::Fig2::m2()","class":"p::Fig2","name":"m2"}
{"kind":"method","id":"p::Fig2::m3(int)","class":"p::Fig2","name":"m3","params":["int"]}
{"kind":"call","src":"p::Fig2::m1()","dst":"p::Fig2::m2()"}
{"kind":"call","src":"p::Fig2::m1()","dst":"p::Fig2::m3(int)"}
{"kind":"call","src":"p::Fig2::m2()","dst":"p::Fig2::m3(int)"}
)J";

} // namespace rmove::testing
