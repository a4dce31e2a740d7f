pub mod csv_input;
pub mod plot;
pub mod results;

pub use csv_input::{read_csv, read_csv_path, write_matrix_csv};
pub use plot::{emit_plot, render_svg, PlotOptions};
pub use results::{
    read_results_csv, write_results, write_results_to, FiRow, ResultDocument, ResultWriter,
    RunMetadata, SosSource,
};
