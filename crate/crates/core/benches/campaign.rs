use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use deldyn::hodge::deligne_sweep;
use deldyn::localglobal::{run_campaign, Bounds};
use deldyn::tannaka::goursat_sweep;

fn job_counts() -> Vec<usize> {
    let n = std::thread::available_parallelism().map_or(1, |n| n.get());
    // always compare against at least two threads, even on one core
    vec![1, n.max(2)]
}

fn campaign(c: &mut Criterion) {
    let bounds = Bounds {
        max_order: 8,
        max_rank: 3,
        ..Bounds::default()
    };
    let mut g = c.benchmark_group("campaign");
    g.sample_size(10);
    for jobs in job_counts() {
        g.bench_with_input(BenchmarkId::new("local_global", jobs), &jobs, |b, &j| {
            b.iter(|| run_campaign(&bounds, j, false).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("deligne", jobs), &jobs, |b, &j| {
            b.iter(|| deligne_sweep(&bounds, j).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("goursat", jobs), &jobs, |b, &j| {
            b.iter(|| goursat_sweep(8, j))
        });
    }
    g.finish();
}

criterion_group!(benches, campaign);
criterion_main!(benches);
