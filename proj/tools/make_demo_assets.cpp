#include <exception>
#include <iostream>

#include "glvr/demo.hpp"

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: glvr_make_assets <output-dir>\n";
        return 2;
    }
    try {
        glvr::write_demo_assets(argv[1]);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    std::cout << "wrote " << argv[1] << "/{grid.glvx,net.glnn,voxel_net.json}\n";
    return 0;
}
