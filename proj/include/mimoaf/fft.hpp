#pragma once

// Thin RAII layer over FFTW. Plans are created once per (length, direction)
// and shared; execution goes through the new-array interface, which FFTW
// documents as thread-safe.

#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <utility>

#include <fftw3.h>

namespace mimoaf::fft
{
    using cdouble = std::complex<double>;

    // forward:  X[k] = sum_n x[n] exp(-i 2 pi k n / L)
    // backward: X[k] = sum_n x[n] exp(+i 2 pi k n / L)   (unnormalised)
    enum class direction
    {
        forward,
        backward
    };

    struct fftw_deleter
    {
        void operator()(void *p) const { fftw_free(p); }
    };

    // 16-byte aligned scratch buffer usable with any cached plan of the same length.
    class buffer
    {
    public:
        explicit buffer(std::size_t n)
            : size_(n), data_(static_cast<fftw_complex *>(fftw_malloc(sizeof(fftw_complex) * n)))
        {
            if (!data_)
                throw std::bad_alloc();
            clear();
        }

        std::size_t size() const { return size_; }
        cdouble *data() { return reinterpret_cast<cdouble *>(data_.get()); }
        const cdouble *data() const { return reinterpret_cast<const cdouble *>(data_.get()); }
        cdouble &operator[](std::size_t i) { return data()[i]; }
        const cdouble &operator[](std::size_t i) const { return data()[i]; }
        fftw_complex *raw() { return data_.get(); }
        void clear()
        {
            for (std::size_t i = 0; i < size_; ++i)
                data()[i] = 0.0;
        }

    private:
        std::size_t size_;
        std::unique_ptr<fftw_complex, fftw_deleter> data_;
    };

    namespace detail
    {
        struct plan_holder
        {
            fftw_plan plan = nullptr;
            ~plan_holder()
            {
                if (plan)
                    fftw_destroy_plan(plan);
            }
        };

        inline std::mutex &planner_mutex()
        {
            static std::mutex m;
            return m;
        }

        inline fftw_plan cached_plan(std::size_t n, direction dir)
        {
            static std::map<std::pair<std::size_t, int>, std::unique_ptr<plan_holder>> cache;
            std::lock_guard lock(planner_mutex());
            auto key = std::make_pair(n, dir == direction::forward ? 0 : 1);
            auto it = cache.find(key);
            if (it != cache.end())
                return it->second->plan;

            buffer in(n), out(n);
            auto holder = std::make_unique<plan_holder>();
            holder->plan = fftw_plan_dft_1d(static_cast<int>(n), in.raw(), out.raw(),
                                            dir == direction::forward ? FFTW_FORWARD : FFTW_BACKWARD,
                                            FFTW_ESTIMATE);
            fftw_plan p = holder->plan;
            cache.emplace(key, std::move(holder));
            return p;
        }
    }

    // out = DFT(in). Buffers must be distinct and of equal length.
    inline void transform(buffer &in, buffer &out, direction dir)
    {
        fftw_plan p = detail::cached_plan(in.size(), dir);
        fftw_execute_dft(p, in.raw(), out.raw());
    }
}
