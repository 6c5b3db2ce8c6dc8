"""Package"""