#include <cstdio>

int main() {
    std::puts("nvp_nav: CLI wiring pending");
    return 0;
}
