fn main() {
    specialfourfolds::cli_main();
}
