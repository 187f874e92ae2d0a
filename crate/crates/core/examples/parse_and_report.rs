//! Parse an input document, print its report and run the bundled corpus.

use obinv::cli::{run, run_corpus, Command, Flags, OutputFormat};
use obinv::format::parse;

const DOC: &str = "\
# overtwisted L(4,1)
page g=0 r=2
curve c class=[1] winding=1
twist -c
twist -c
twist -c
twist -c
";

fn main() {
    let doc = parse(DOC).unwrap();
    print!("{}", run(&Command::Report, &doc, &Flags::default()).unwrap().stdout);
    let machine = Flags { format: OutputFormat::Machine, ..Flags::default() };
    print!("{}", run(&Command::D3, &doc, &machine).unwrap().stdout);

    match parse("page g=0 r=2\ntwist +q\n") {
        Ok(_) => unreachable!(),
        Err(e) => println!("error: {e}"),
    }

    let corpus = run_corpus(Some("lens_ot"));
    print!("{}", corpus.to_text());
}
