fn main() {
    // Symmetric eigensolvers and dgemm come from the system OpenBLAS, which
    // bundles LAPACK. No Rust-side LAPACK crate is involved.
    println!("cargo:rustc-link-lib=dylib=openblas");
}
