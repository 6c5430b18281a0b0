#include "acal/errors.hpp"

#include <exception>

namespace acal {

void rethrow_with_context(const std::string& prefix) {
    try {
        throw;
    } catch (const ParseError& e) {
        throw e.relabeled(prefix + e.what());
    } catch (const DataError& e) {
        throw DataError(prefix + e.what());
    } catch (const IllConditionedError& e) {
        throw e.relabeled(prefix + e.what());
    } catch (const EstimationError& e) {
        throw EstimationError(prefix + e.what());
    } catch (const EvaluationError& e) {
        throw EvaluationError(prefix + e.what());
    } catch (const NumericalError& e) {
        throw NumericalError(prefix + e.what());
    } catch (const ConfigError& e) {
        throw ConfigError(prefix + e.what());
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(prefix + e.what());
    } catch (const std::exception& e) {
        throw std::runtime_error(prefix + e.what());
    }
}

} // namespace acal
