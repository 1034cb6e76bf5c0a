// Wall-clock comparison of the serial reference kernels against the
// parallel ones on a solver-scale mesh, with a bitwise agreement check
// (the parallel kernels promise the exact serial reduction order).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "schwarzlab/contour.hpp"
#include "schwarzlab/disk_mesh.hpp"
#include "schwarzlab/quadrature.hpp"

using namespace schwarz;

static double now_seconds() {
#ifdef _OPENMP
    return omp_get_wtime();
#else
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
#endif
}

int main() {
    const double m = 2.0;
    const double theta = 1.5707963267948966;
    const double R = 5.0;
    const QuadratureRule rule = QuadratureRule::EdgeMidpoints3;
    const DiskMesh dm = init_disk_mesh(build_contour(theta, R, m, 64), 3);
    const TriMesh& mesh = dm.mesh;
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (built without OpenMP)\n");
#endif
    std::printf("mesh: %d vertices, %d triangles\n\n", mesh.vertex_count(),
                mesh.triangle_count());

    const int reps = 50;

    double area_serial = 0.0, area_parallel = 0.0;
    double t0 = now_seconds();
    for (int r = 0; r < reps; ++r) area_serial = serial::mesh_area_g(m, mesh, rule);
    double t1 = now_seconds();
    for (int r = 0; r < reps; ++r) area_parallel = mesh_area_g(m, mesh, rule);
    double t2 = now_seconds();
    const double area_ms_serial = 1e3 * (t1 - t0) / reps;
    const double area_ms_parallel = 1e3 * (t2 - t1) / reps;
    std::printf("%-16s serial %9.3f ms   parallel %9.3f ms   speedup %5.2fx   bitwise %s\n",
                "mesh_area_g", area_ms_serial, area_ms_parallel,
                area_ms_serial / area_ms_parallel,
                area_serial == area_parallel ? "equal" : "DIFFERENT");

    std::vector<Vec3> grad_serial, grad_parallel;
    t0 = now_seconds();
    for (int r = 0; r < reps; ++r) grad_serial = serial::area_gradient_g(m, mesh, rule);
    t1 = now_seconds();
    for (int r = 0; r < reps; ++r) grad_parallel = area_gradient_g(m, mesh, rule);
    t2 = now_seconds();
    bool grad_equal = grad_serial.size() == grad_parallel.size();
    for (size_t i = 0; grad_equal && i < grad_serial.size(); ++i)
        grad_equal = grad_serial[i].x == grad_parallel[i].x &&
                     grad_serial[i].y == grad_parallel[i].y &&
                     grad_serial[i].z == grad_parallel[i].z;
    const double grad_ms_serial = 1e3 * (t1 - t0) / reps;
    const double grad_ms_parallel = 1e3 * (t2 - t1) / reps;
    std::printf("%-16s serial %9.3f ms   parallel %9.3f ms   speedup %5.2fx   bitwise %s\n",
                "area_gradient_g", grad_ms_serial, grad_ms_parallel,
                grad_ms_serial / grad_ms_parallel, grad_equal ? "equal" : "DIFFERENT");

    return (area_serial == area_parallel && grad_equal) ? 0 : 1;
}
