#include <cstdio>

int main() {
    std::puts("ebbeam CLI placeholder");
    return 0;
}
