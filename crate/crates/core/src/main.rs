fn main() {
    sms_forge::cli::main();
}
